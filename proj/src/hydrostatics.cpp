#include "floatwave/hydrostatics.hpp"

#include <cmath>

namespace floatwave {

HydrostaticModel compute_matrices(const BodySection& body, const Decomposition& dec) {
    HydrostaticModel m;
    const double x0 = dec.centroid_of_mass.x;
    const double y0 = dec.centroid_of_mass.y;

    // body integrals weighted by the relative density
    for (const auto& r : body.density_regions) {
        const double a00 = polygon_moment(r.polygon, 0, 0);
        const double a10 = polygon_moment(r.polygon, 1, 0);
        const double a01 = polygon_moment(r.polygon, 0, 1);
        const double a20 = polygon_moment(r.polygon, 2, 0);
        const double a02 = polygon_moment(r.polygon, 0, 2);
        m.IM += r.rho * a00;
        m.IM2 += r.rho * (a20 - 2 * x0 * a10 + x0 * x0 * a00 + a02 - 2 * y0 * a01 +
                          y0 * y0 * a00);
    }

    // waterplane and immersed-part integrals
    for (const auto& part : dec.parts) {
        const double lo = part.waterplane.lo - x0;
        const double hi = part.waterplane.hi - x0;
        m.ID += hi - lo;
        m.IDx += 0.5 * (hi * hi - lo * lo);
        m.IDxx += (hi * hi * hi - lo * lo * lo) / 3.0;
        m.immersed_area += polygon_moment(part.polygon, 0, 0);
        m.IBy += polygon_moment(part.polygon, 0, 1) - y0 * polygon_moment(part.polygon, 0, 0);
    }

    m.E.diagonal() << m.IM, m.IM, m.IM2;
    m.K(1, 1) = m.ID;
    m.K(1, 2) = m.K(2, 1) = m.IDx;
    m.K(2, 2) = m.IDxx + m.IBy;
    return m;
}

EquilibriumReport check_equilibrium(const HydrostaticModel& model, const BodySection& /*body*/,
                                    const Decomposition& dec, double tol_rel) {
    EquilibriumReport rep;
    const double area = model.immersed_area;
    rep.archimedes_residual = std::abs(model.IM - area) / std::max(area, 1e-300);

    double bx = 0.0; // int_B (x - x0)
    for (const auto& part : dec.parts)
        bx += polygon_moment(part.polygon, 1, 0) -
              dec.centroid_of_mass.x * polygon_moment(part.polygon, 0, 0);
    rep.alignment_residual = std::abs(bx) / std::max(area * dec.body_diameter, 1e-300);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> esK(model.K);
    const double kscale = std::max(model.K.norm(), 1e-300);
    rep.K_positive_semidefinite = esK.eigenvalues().minCoeff() >= -tol_rel * kscale;

    Eigen::Matrix2d Kp = model.K.block<2, 2>(1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> esKp(Kp);
    rep.Kprime_positive_definite = esKp.eigenvalues().minCoeff() > tol_rel * kscale;

    rep.in_equilibrium =
        rep.archimedes_residual <= tol_rel && rep.alignment_residual <= tol_rel;
    rep.stable = rep.in_equilibrium && rep.K_positive_semidefinite &&
                 rep.Kprime_positive_definite;
    return rep;
}

double lambda0(const HydrostaticModel& model, double g) {
    Eigen::Matrix2d Kp = model.K.block<2, 2>(1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> esKp(Kp);
    if (model.K.norm() > 0 && esKp.eigenvalues().minCoeff() <= 0)
        throw Error(ErrorCode::Unstable, "K' is not positive definite");
    // E is diagonal positive; reduce g K v = lambda E v to an ordinary
    // symmetric 3x3 eigenproblem via E^{-1/2}
    Eigen::Vector3d d = model.E.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::Matrix3d M = g * d.asDiagonal() * model.K * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.computeDirect(M);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

} // namespace floatwave
