#include <doctest.h>

#include <cmath>
#include <random>

#include "floatwave/dispersion.hpp"

using namespace floatwave;

TEST_CASE("propagating root of the dispersion relation") {
    // nu h = 1 reference root of kappa tanh kappa = 1
    CHECK(solve_dispersion(1.0, 1.0) == doctest::Approx(1.199678640).epsilon(1e-9));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double nu = u(rng), h = u(rng);
        const double k0 = solve_dispersion(nu, h);
        CHECK(std::abs(k0 * std::tanh(k0 * h) - nu) <= 1e-12 * nu);
    }

    // deep water limit kappa0 -> nu
    CHECK(std::abs(solve_dispersion(2.0, 10.0) - 2.0) < 1e-8 * 2.0);
}

TEST_CASE("evanescent roots bracketed per branch") {
    const double nu = 1.0, h = 1.0;
    for (int n = 1; n <= 6; ++n) {
        const double kn = solve_evanescent(nu, h, n);
        CHECK(kn > (n - 0.5) * M_PI / h);
        CHECK(kn < n * M_PI / h);
        CHECK(std::abs(kn * std::sin(kn * h) + nu * std::cos(kn * h)) < 1e-10 * kn);
    }
}

TEST_CASE("wave parameters") {
    const double g = 9.81;
    // nu = 1, k = 0.6 -> ell = 0.8
    WaveParameters p = make_wave_parameters(std::sqrt(g), 0.6, g, 5.0, false);
    CHECK(p.nu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.ell == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(p.ell0 == doctest::Approx(std::sqrt(p.kappa0 * p.kappa0 - 0.36)).epsilon(1e-13));

    // k = 0: ell = nu
    WaveParameters p0 = make_wave_parameters(2.0, 0.0, g, 3.0, false);
    CHECK(p0.ell == doctest::Approx(p0.nu).epsilon(1e-13));

    CHECK_THROWS_AS(make_wave_parameters(1.0, 5.0, g, 1.0, false), Error); // k >= nu
}

TEST_CASE("finite-depth propagating root always dominates nu") {
    // kappa0 tanh(kappa0 h) = nu with tanh < 1 forces kappa0 > nu, so the
    // cross-plane wave survives for every admissible k < nu
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
        const double nu = u(rng), h = u(rng);
        const double k0 = solve_dispersion(nu, h);
        CHECK(k0 >= nu);
        // the gap is only resolvable in double before tanh saturates
        if (nu * h < 5.0) CHECK(k0 > nu);
    }
}

TEST_CASE("vertical modes are orthonormal and satisfy the end conditions") {
    const double g = 9.81, h = 1.0;
    WaveParameters p = make_wave_parameters(std::sqrt(g), 0.3, g, h, false);
    auto modes = vertical_modes(p, 4);
    REQUIRE(modes.size() == 5);
    CHECK(modes[0].propagating);
    CHECK(modes[1].kappa > M_PI / 2);
    CHECK(modes[1].kappa < M_PI);
    CHECK(modes[2].kappa > 3 * M_PI / 2);
    CHECK(modes[2].kappa < 2 * M_PI);

    const int N = 10000;
    for (std::size_t a = 0; a < modes.size(); ++a)
        for (std::size_t b = a; b < modes.size(); ++b) {
            double s = 0.0;
            for (int i = 0; i <= N; ++i) {
                const double y = -h + h * i / N;
                const double w = (i == 0 || i == N) ? 0.5 : 1.0;
                s += w * modes[a].eval(y, h) * modes[b].eval(y, h);
            }
            s *= h / N;
            CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-7));
        }

    // free-surface and bottom conditions for the propagating mode
    CHECK(std::abs(modes[0].eval_dy(0.0, h) - p.nu * modes[0].eval(0.0, h)) < 1e-10);
    CHECK(std::abs(modes[0].eval_dy(-h, h)) < 1e-10);
}

TEST_CASE("band classifier on reference points") {
    BandClassification c = band_classifier(M_PI / 4);
    CHECK(c.omega_minus);
    CHECK_FALSE(c.omega_plus);
    CHECK(c.m == 0);

    c = band_classifier(3 * M_PI / 4);
    CHECK_FALSE(c.omega_minus);
    CHECK(c.omega_plus);
    CHECK(c.m == 0);

    c = band_classifier(M_PI / 2);
    CHECK(c.omega_minus);
    CHECK(c.omega_plus);

    c = band_classifier(M_PI); // endpoint of both the m=0 upper and m=1 lower band
    CHECK(c.omega_minus);
    CHECK(c.omega_plus);

    c = band_classifier(0.0); // lower endpoint of the m=0 band only
    CHECK(c.omega_minus);
    CHECK_FALSE(c.omega_plus);
}

TEST_CASE("band complementarity on random values") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 10 * M_PI);
    auto check_one = [](double lb) {
        BandClassification c = band_classifier(lb);
        CHECK((c.omega_minus || c.omega_plus));
        // strict inequalities define the interiors
        const double t = lb / M_PI;
        const double fr = t - std::floor(t);
        const bool interior_minus = fr > 0 && fr < 0.5;
        const bool interior_plus = fr > 0.5 && fr < 1.0;
        if (interior_minus) {
            CHECK(c.omega_minus);
            CHECK_FALSE(c.omega_plus);
        }
        if (interior_plus) {
            CHECK(c.omega_plus);
            CHECK_FALSE(c.omega_minus);
        }
        if (c.omega_minus && c.omega_plus) {
            const double r = std::fmod(lb, M_PI / 2);
            CHECK(std::min(r, M_PI / 2 - r) < 1e-9);
        }
    };
    for (int i = 0; i < 1000; ++i) check_one(u(rng));
    for (int m = 0; m < 6; ++m) check_one(m * M_PI / 2);
}

TEST_CASE("finite depth uses ell0 in the band classifier") {
    const double g = 9.81;
    WaveParameters p = make_wave_parameters(2.5, 0.2, g, 1.5, false);
    BandClassification a = band_classifier(p, 1.0);
    BandClassification b = band_classifier(p.ell0 * 1.0);
    CHECK(a.omega_minus == b.omega_minus);
    CHECK(a.omega_plus == b.omega_plus);
    CHECK(a.m == b.m);
}

TEST_CASE("standard vs paper finite-depth outgoing wavenumber") {
    const double g = 9.81;
    WaveParameters p = make_wave_parameters(3.0, 0.4, g, 1.0, false);
    // both roots are computed; the solver uses sqrt(kappa0^2 - k^2) and the
    // discrepancy against the root of l0 tanh(l0 h) = ell is reported
    CHECK(p.ell0 == doctest::Approx(std::sqrt(p.kappa0 * p.kappa0 - 0.16)).epsilon(1e-13));
    const double lp = p.ell0_paper;
    CHECK(std::abs(lp * std::tanh(lp * 1.0) - p.ell) < 1e-10);
    CHECK(p.ell0_discrepancy == doctest::Approx(std::abs(p.ell0 - lp) / p.ell0).epsilon(1e-10));
}
