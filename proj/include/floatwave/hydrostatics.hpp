#pragma once

#include <Eigen/Dense>

#include "floatwave/geometry.hpp"

namespace floatwave {

struct EquilibriumReport {
    double archimedes_residual = 0.0;      // |I^M - area(B)| / area(B)
    double alignment_residual = 0.0;       // |int_B (x - x0)| / (area * diam)
    bool K_positive_semidefinite = false;
    bool Kprime_positive_definite = false;
    bool in_equilibrium = false;
    bool stable = false;
};

/// Mass/inertia matrix E = diag(I^M, I^M, I^M_2), restoring matrix K built
/// from the waterplane moments I^D, I^D_x, I^D_xx and the buoyancy moment
/// I^B_y, plus the derived threshold lambda0 of the body quadratic form.
struct HydrostaticModel {
    Eigen::Matrix3d E = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
    double IM = 0.0;
    double IM2 = 0.0;
    double ID = 0.0;
    double IDx = 0.0;
    double IDxx = 0.0;
    double IBy = 0.0;
    double immersed_area = 0.0;
    EquilibriumReport report;
};

HydrostaticModel compute_matrices(const BodySection& body, const Decomposition& dec);

EquilibriumReport check_equilibrium(const HydrostaticModel& model, const BodySection& body,
                                    const Decomposition& dec, double tol_rel = 1e-8);

// largest lambda with det(lambda E - g K) = 0; property Omega(omega) is
// omega^2 >= lambda0
double lambda0(const HydrostaticModel& model, double g);

} // namespace floatwave
