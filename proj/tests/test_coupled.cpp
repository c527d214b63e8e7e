#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "floatwave/coupled.hpp"

using namespace floatwave;

namespace {

BodySection rectangle_body() {
    BodySection b;
    b.outer_contour = {{-1, -0.5}, {1, -0.5}, {1, 0.5}, {-1, 0.5}};
    b.density_regions.push_back({b.outer_contour, 0.5});
    return b;
}

struct Setup {
    BodySection body;
    Decomposition dec;
    HydrostaticModel model;
    Mesh mesh;
    WaveParameters params;
};

Setup rectangle_setup(double h_mesh, double omega, double k, double depth = 1.0) {
    Setup s;
    s.body = rectangle_body();
    s.dec = split_at_waterline(s.body);
    s.model = compute_matrices(s.body, s.dec);
    s.model.report = check_equilibrium(s.model, s.body, s.dec);
    MeshConfig mc;
    mc.h_mesh = h_mesh;
    mc.symmetric = true;
    s.mesh = generate_mesh(&s.dec, depth, mc);
    s.params = make_wave_parameters(omega, k, 9.81, depth, false);
    return s;
}

const double kOmegaNu1 = std::sqrt(9.81); // nu = 1

} // namespace

TEST_CASE("radiation fields have the parity of their motion") {
    Setup s = rectangle_setup(0.1, kOmegaNu1, 0.5);
    FieldProblem prob(s.mesh, s.params);
    RadiationSet rad = radiation_set(prob, s.dec);
    REQUIRE(rad.active == std::vector<int>{0, 1, 2});
    // sway and roll are odd in x, heave is even
    const double sign[3] = {-1.0, 1.0, -1.0};
    for (std::size_t j = 0; j < 3; ++j) {
        const CVec& phi = rad.phi[j].phi;
        const double scale = phi.cwiseAbs().maxCoeff();
        double worst = 0.0;
        for (std::size_t i = 0; i < s.mesh.nodes.size(); ++i) {
            const int mi = s.mesh.mirror[i];
            worst = std::max(worst, std::abs(phi[static_cast<int>(i)] -
                                             sign[j] * phi[mi]));
        }
        CHECK(worst <= 1e-8 * scale);
    }
}

TEST_CASE("parity-restricted solve matches the unrestricted one") {
    Setup s = rectangle_setup(0.1, kOmegaNu1, 0.5);
    FieldProblem any(s.mesh, s.params);
    FieldProblem odd(s.mesh, s.params, {}, Parity::Odd);
    FieldProblem even(s.mesh, s.params, {}, Parity::Even);

    RadiationSet r_any = radiation_set(any, s.dec);
    RadiationSet r_sway = radiation_set(odd, s.dec, MotionRestriction::Sway);
    RadiationSet r_heave = radiation_set(even, s.dec, MotionRestriction::Heave);

    CHECK(std::abs(r_sway.reaction(0, 0) - r_any.reaction(0, 0)) <=
          1e-8 * std::abs(r_any.reaction(0, 0)));
    CHECK(std::abs(r_heave.reaction(1, 1) - r_any.reaction(1, 1)) <=
          1e-8 * std::abs(r_any.reaction(1, 1)));

    // an odd field vanishes on the symmetry axis
    for (std::size_t i = 0; i < s.mesh.nodes.size(); ++i)
        if (s.mesh.mirror[i] == static_cast<int>(i))
            CHECK(std::abs(r_sway.phi[0].phi[static_cast<int>(i)]) == 0.0);
}

TEST_CASE("damping is nonnegative and matches the radiated flux") {
    Setup s = rectangle_setup(0.1, kOmegaNu1, 0.5);
    FieldProblem prob(s.mesh, s.params);
    RadiationSet rad = radiation_set(prob, s.dec);
    const double w2 = s.params.omega * s.params.omega;
    for (std::size_t j = 0; j < 3; ++j) {
        const double bjj = rad.damping(static_cast<int>(j), static_cast<int>(j));
        CHECK(bjj >= 0.0);
        const FarField& ff = rad.phi[j].farfield;
        const double flux = s.params.ell0 * (std::norm(ff.a_plus) + std::norm(ff.a_minus));
        CHECK(w2 * bjj == doctest::Approx(flux).scale(1.0).epsilon(1e-10));
    }
    CHECK(rad.damping(1, 1) > 1e-3); // heave radiates strongly at nu h = 1
}

TEST_CASE("reaction matrix is reciprocal and parity block-diagonal") {
    Setup s = rectangle_setup(0.1, kOmegaNu1, 0.5);
    FieldProblem prob(s.mesh, s.params);
    RadiationSet rad = radiation_set(prob, s.dec);
    const double scale = rad.reaction.cwiseAbs().maxCoeff();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            CHECK(std::abs(rad.reaction(i, j) - rad.reaction(j, i)) <= 1e-8 * scale);
    // heave decouples from sway and roll on a symmetric section
    CHECK(std::abs(rad.reaction(0, 1)) <= 1e-9 * scale);
    CHECK(std::abs(rad.reaction(1, 0)) <= 1e-9 * scale);
    CHECK(std::abs(rad.reaction(1, 2)) <= 1e-9 * scale);
    CHECK(std::abs(rad.reaction(2, 1)) <= 1e-9 * scale);
}

TEST_CASE("hydrodynamic coefficients are stable under mesh refinement") {
    Setup coarse = rectangle_setup(0.1, kOmegaNu1, 0.5);
    Setup fine = rectangle_setup(0.05, kOmegaNu1, 0.5);
    FieldProblem pc(coarse.mesh, coarse.params);
    FieldProblem pf(fine.mesh, fine.params);
    RadiationSet rc = radiation_set(pc, coarse.dec);
    RadiationSet rf = radiation_set(pf, fine.dec);
    for (int j = 0; j < 3; ++j) {
        const double ac = rc.added_mass(j, j), af = rf.added_mass(j, j);
        const double bc = rc.damping(j, j), bf = rf.damping(j, j);
        // waterline corner singularities slow the convergence of the moments
        CHECK(std::abs(ac - af) <= 0.06 * std::max(std::abs(af), 0.1));
        CHECK(std::abs(bc - bf) <= 0.06 * std::max(std::abs(bf), 0.1));
    }
}

TEST_CASE("coupled matrix assembles the restricted block") {
    Setup s = rectangle_setup(0.1, kOmegaNu1, 0.5);
    FieldProblem prob(s.mesh, s.params);
    RadiationSet rad = radiation_set(prob, s.dec, MotionRestriction::Heave);
    CoupledMatrix cm = coupled_matrix(rad, s.model, s.params);
    REQUIRE(cm.active == std::vector<int>{1});
    const double w2 = s.params.omega * s.params.omega;
    const Complex expect = -w2 * s.model.E(1, 1) + s.params.g * s.model.K(1, 1) -
                           s.params.omega * rad.reaction(1, 1);
    CHECK(std::abs(cm.T(1, 1) - expect) <= 1e-14 * std::abs(expect));
    CHECK(cm.sigma_min == doctest::Approx(std::abs(expect)).epsilon(1e-12));
    CHECK(cm.scale > 0.0);
    CHECK(std::abs(cm.null_vector(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scattering on the empty strip is perfect transmission") {
    MeshConfig mc;
    mc.h_mesh = 0.1;
    mc.x_trunc = 3.0;
    Mesh mesh = generate_mesh(nullptr, 1.0, mc);
    WaveParameters p = make_wave_parameters(kOmegaNu1, 0.5, 9.81, 1.0, false);
    FieldProblem prob(mesh, p);
    Decomposition empty;
    HydrostaticModel model;
    ScatterResult res = solve_scattering(prob, empty, model);
    CHECK(std::abs(res.reflection) <= 1e-12);
    CHECK(std::abs(res.transmission - Complex(1.0, 0.0)) <= 1e-12);
    CHECK(res.energy_defect <= 1e-12);
}

TEST_CASE("rectangle scattering conserves energy") {
    Setup s = rectangle_setup(0.1, kOmegaNu1, 0.5);
    FieldProblem prob(s.mesh, s.params);
    ScatterResult res = solve_scattering(prob, s.dec, s.model);
    CHECK(std::abs(res.reflection) <= 1.01);
    CHECK(std::abs(res.transmission) <= 1.01);
    CHECK(res.energy_defect <= 1e-2);
    // symmetric body moving freely still scatters some of the incident wave
    CHECK(std::abs(res.reflection) + std::abs(res.transmission) > 0.5);
    // the heave response is driven by a nonzero exciting force
    CHECK(std::abs(res.exciting_force(1)) > 1e-3);
}

TEST_CASE("normal incidence is the continuous limit of oblique incidence") {
    Setup s0 = rectangle_setup(0.1, kOmegaNu1, 0.0);
    Setup s1 = rectangle_setup(0.1, kOmegaNu1, 1e-12);
    FieldProblem p0(s0.mesh, s0.params);
    FieldProblem p1(s1.mesh, s1.params);
    ScatterResult r0 = solve_scattering(p0, s0.dec, s0.model);
    ScatterResult r1 = solve_scattering(p1, s1.dec, s1.model);
    CHECK(std::abs(r0.reflection - r1.reflection) <= 1e-8);
    CHECK(std::abs(r0.transmission - r1.transmission) <= 1e-8);
}

TEST_CASE("trapped-mode scan reports clean rows for a radiating rectangle") {
    BodySection body = rectangle_body();
    Decomposition dec = split_at_waterline(body);
    HydrostaticModel model = compute_matrices(body, dec);
    model.report = check_equilibrium(model, body, dec);
    WaterConfig water;
    water.infinite_depth = false;
    water.depth = 1.0;

    ScanGrid grid;
    grid.omegas = {kOmegaNu1 * 0.9, kOmegaNu1, kOmegaNu1 * 1.1};
    grid.k_frac = 0.5;
    ScanOptions opt;
    opt.mesh.h_mesh = 0.15;
    opt.mesh.symmetric = true;

    auto rows = trapped_mode_scan(body, dec, model, water, grid, opt);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.error.empty());
        CHECK_FALSE(row.flagged);
        CHECK(row.sigma_ratio > 1e-6);
        CHECK(row.flux_ratio > 1e-8);
        CHECK(row.ell0 > 0.0);
        CHECK(row.nu == doctest::Approx(row.omega * row.omega / 9.81));
    }

    // worker pool gives bitwise identical rows
    setenv("FLOATWAVE_WORKERS", "3", 1);
    auto rows2 = trapped_mode_scan(body, dec, model, water, grid, opt);
    unsetenv("FLOATWAVE_WORKERS");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows2[i].sigma_ratio == rows[i].sigma_ratio);
        CHECK(rows2[i].flux_ratio == rows[i].flux_ratio);
    }
}

TEST_CASE("scan survives a failing frequency and records the error") {
    BodySection body = rectangle_body();
    Decomposition dec = split_at_waterline(body);
    HydrostaticModel model = compute_matrices(body, dec);
    WaterConfig water;
    water.infinite_depth = false;
    water.depth = 1.0;

    ScanGrid grid;
    grid.omegas = {kOmegaNu1, 0.5}; // nu(0.5) = 0.025 < k: oblique angle too large
    grid.k = 0.5;
    ScanOptions opt;
    opt.mesh.h_mesh = 0.2;
    opt.mesh.symmetric = true;

    auto rows = trapped_mode_scan(body, dec, model, water, grid, opt);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[1].error.empty());
}
