#pragma once

#include <vector>

#include "floatwave/errors.hpp"
#include "floatwave/geometry.hpp"

namespace floatwave {

/// Wave parameters for one (omega, k) pair. Finite depth is always used by
/// the solver; an infinite-depth configuration is realized by a deep
/// artificial bottom chosen elsewhere, and `infinite_depth` records that.
struct WaveParameters {
    double omega = 0.0;
    double k = 0.0;      // axial wavenumber along the generators
    double g = 9.81;
    double nu = 0.0;     // omega^2 / g
    double ell = 0.0;    // sqrt(nu^2 - k^2)
    bool infinite_depth = false;
    double depth = 0.0;  // actual depth used by the solver (h or h_eff)
    double kappa0 = 0.0; // positive root of kappa tanh(kappa h) = nu
    std::vector<double> evanescent_roots; // kappa_n tan(kappa_n h) = -nu
    double ell0 = 0.0;        // sqrt(kappa0^2 - k^2), outgoing x-wavenumber
    double ell0_paper = 0.0;  // root of l0 tanh(l0 h) = ell (reported only)
    double ell0_discrepancy = 0.0; // |ell0 - ell0_paper| / ell0
};

// positive root of kappa tanh(kappa h) = nu, to ~1e-14 relative
double solve_dispersion(double nu, double h);
// n-th evanescent root, kappa_n in ((n-1/2) pi/h, n pi/h), n >= 1
double solve_evanescent(double nu, double h, int n);

WaveParameters make_wave_parameters(double omega, double k, double g, double depth_h,
                                    bool infinite_depth_flag = false);

/// Orthonormal vertical eigenfunctions on (-h, 0). Mode 0 is the propagating
/// cosh mode, modes n >= 1 are the decaying cos modes; unit L2 norm.
struct VerticalMode {
    double kappa = 0.0;   // vertical wavenumber
    double norm_c = 0.0;  // normalization constant
    bool propagating = false;
    double x_rate = 0.0;  // ell0 if propagating, sqrt(kappa^2 + k^2) if not

    double eval(double y, double h) const;
    double eval_dy(double y, double h) const;
};

std::vector<VerticalMode> vertical_modes(const WaveParameters& params, int M);

struct BandClassification {
    bool omega_minus = false; // pi m <= l b <= pi (2m+1)/2
    bool omega_plus = false;  // pi (2m+1)/2 <= l b <= pi (m+1)
    int m = 0;
};

// classifies l*b (l = ell for infinite depth, ell0 for finite depth)
BandClassification band_classifier(double lb);
BandClassification band_classifier(const WaveParameters& params, double half_spacing);

} // namespace floatwave
