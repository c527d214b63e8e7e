#pragma once

#include <optional>
#include <string>

#include "floatwave/coupled.hpp"

namespace floatwave {

/// Relative residuals of the energy identities, evaluated by quadrature on
/// the truncated domain. Each residual is |LHS - RHS| / max(|LHS|, |RHS|, eps).
struct AuditReport {
    double energy_flux_residual = 0.0;         // outgoing flux vs -Im int_S conj(phi) dn phi
    double transposed_identity_residual = 0.0; // body-side vs fluid-side reaction
    double combined_identity_residual = 0.0;   // flux balance vs Im of the body form
    double equipartition_residual = 0.0;       // kinetic vs potential energy balance
    double ineq_margin = 0.0; // nu int_F |phi|^2 - int_W (|grad phi|^2 + k^2 |phi|^2)
    std::optional<double> john_transform_residual;
};

// radiation solution: data = omega N^T z on S, outgoing, motion vector z;
// motion_eq_holds marks solutions whose z satisfies the motion equations
AuditReport audit_solution(const FieldSolution& sol, const Eigen::Vector3cd& z,
                           const HydrostaticModel& model, bool motion_eq_holds,
                           bool outgoing);

// column transform a(x) = int phi e^{nu y} dy on free-surface columns; returns
// max |a'' + ell^2 a| / max |a| (deep-truncation configurations only)
double john_transform_residual(const Mesh& mesh, const FieldSolution& sol);

struct UniquenessCertificate {
    std::string applicable_statement; // Corollary1, Prop2..Prop8 or none
    bool finite_depth_analogue = false;
    std::vector<std::pair<std::string, bool>> conditions_checked;
};

struct CertifyInput {
    bool single_part = false;
    bool two_part_symmetric = false;
    bool john_all = false;
    bool equilibrium = false;
    bool omega_property = false; // omega^2 >= lambda0
    bool omega_minus = false;
    bool omega_plus = false;
    bool heave_extra = false; // omega^2 >= g I^D / I^M
    bool roll_extra = false;  // omega^2 >= g (I^D_xx + I^B_y) / I^M_2
    MotionRestriction restriction = MotionRestriction::Full;
    Parity parity = Parity::Any;
    bool finite_depth = false;
};

UniquenessCertificate certify(const CertifyInput& in);

CertifyInput make_certify_input(const BodySection& body, const Decomposition& dec,
                                const HydrostaticModel& model, const WaveParameters& params,
                                MotionRestriction restriction, Parity parity);

} // namespace floatwave
