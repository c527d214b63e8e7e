#pragma once

#include <optional>

#include "floatwave/hydrostatics.hpp"
#include "floatwave/solver.hpp"

namespace floatwave {

enum class MotionRestriction { Full, Sway, Heave, Roll };

const char* to_string(MotionRestriction m);
const char* to_string(Parity p);

struct RadiationSet {
    std::vector<FieldSolution> phi; // per active motion index, order of `active`
    std::vector<int> active;        // motion indices in {0,1,2}
    // hydrodynamic reaction r_ij = int_S phi_j N_i ds (full 3x3, inactive
    // rows/cols zero); omega * r = omega^2 (a + i b), A = -a, B = b
    Eigen::Matrix3cd reaction = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3d added_mass = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d damping = Eigen::Matrix3d::Zero();
};

struct CoupledMatrix {
    Eigen::Matrix3cd T = Eigen::Matrix3cd::Zero(); // restricted block is active
    std::vector<int> active;
    double sigma_min = 0.0;
    double scale = 0.0; // magnitude scale of the restricted block
    Eigen::Vector3cd null_vector = Eigen::Vector3cd::Zero(); // smallest singular direction
};

// Neumann data  omega * N_j  on S for a unit motion of component j
NeumannData radiation_data(const Decomposition& dec, const WaveParameters& params, int j);

RadiationSet radiation_set(const FieldProblem& problem, const Decomposition& dec,
                           MotionRestriction restriction = MotionRestriction::Full);

CoupledMatrix coupled_matrix(const RadiationSet& radset, const HydrostaticModel& model,
                             const WaveParameters& params);

struct ScanOptions {
    MotionRestriction restriction = MotionRestriction::Full;
    Parity parity = Parity::Any;
    double sigma_threshold = 1e-6;   // sigma_min / scale
    double flux_threshold = 1e-8;    // radiated flux / kinetic energy
    int n_modes = 12;
    MeshConfig mesh;
};

struct ScanRow {
    double omega = 0.0;
    double nu = 0.0;
    double ell = 0.0;
    double ell0 = 0.0;
    double sigma_ratio = 0.0;
    double flux_ratio = 0.0; // radiated flux of the null vector / kinetic energy
    bool flagged = false;
    std::string certificate; // filled by the audits layer
    std::string error;       // per-frequency failure, scan continues
};

struct ScatterResult {
    Eigen::Vector3cd z = Eigen::Vector3cd::Zero();
    Complex reflection = 0.0;
    Complex transmission = 0.0;
    double energy_defect = 0.0; // | |R|^2 + |T|^2 - 1 |
    CoupledMatrix matrix;
    FieldSolution total_field;       // scattered + radiated part (no incident)
    Complex incident_amp = 0.0;      // modal amplitude of the incident wave
    Eigen::Vector3cd exciting_force = Eigen::Vector3cd::Zero();
};

// incident potential cosh(kappa0 (y+h))/cosh(kappa0 h) e^{i l0 x}
Complex incident_potential(const WaveParameters& params, const Point& p);

ScatterResult solve_scattering(const FieldProblem& problem, const Decomposition& dec,
                               const HydrostaticModel& model);

// effective depth for the deep-truncation approximation of infinite depth
double effective_depth(double nu, double max_draft);

struct ScanGrid {
    std::vector<double> omegas;
    double k = 0.0;      // absolute axial wavenumber
    double k_frac = -1.; // if >= 0, use k = k_frac * nu instead
};

std::vector<ScanRow> trapped_mode_scan(const BodySection& body, const Decomposition& dec,
                                       const HydrostaticModel& model,
                                       const WaterConfig& water, const ScanGrid& grid,
                                       const ScanOptions& options);

} // namespace floatwave
