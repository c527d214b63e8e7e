#include "floatwave/dispersion.hpp"

#include <cmath>

namespace floatwave {

namespace {

template <class F>
double bisect(F f, double lo, double hi, double width) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > width; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0) == (fm <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double solve_dispersion(double nu, double h) {
    if (nu <= 0 || h <= 0) throw Error(ErrorCode::BadConfig, "need nu > 0 and h > 0");
    // f(kappa) = kappa tanh(kappa h) - nu is increasing; root > nu
    auto f = [&](double x) { return x * std::tanh(x * h) - nu; };
    double lo = 0.0;
    double hi = std::max(nu, 1.0 / h);
    while (f(hi) < 0) hi *= 2.0;
    double x = bisect(f, lo, hi, 1e-14 * std::max(1.0, hi));
    for (int it = 0; it < 2; ++it) { // Newton polish
        const double t = std::tanh(x * h);
        const double df = t + x * h * (1.0 - t * t);
        x -= (x * t - nu) / df;
    }
    return x;
}

double solve_evanescent(double nu, double h, int n) {
    // root of kappa tan(kappa h) = -nu in ((n-1/2) pi/h, n pi/h); bisect the
    // continuous form q(kappa) = kappa sin(kappa h) + nu cos(kappa h)
    const double pi = M_PI;
    auto q = [&](double x) { return x * std::sin(x * h) + nu * std::cos(x * h); };
    const double lo = (n - 0.5) * pi / h;
    const double hi = n * pi / h;
    double x = bisect(q, lo * (1 + 1e-15), hi, 1e-14 * hi);
    for (int it = 0; it < 2; ++it) {
        const double s = std::sin(x * h), c = std::cos(x * h);
        const double dq = s + x * h * c - nu * h * s;
        const double step = q(x) / dq;
        if (x - step > lo && x - step < hi) x -= step;
    }
    return x;
}

WaveParameters make_wave_parameters(double omega, double k, double g, double depth_h,
                                    bool infinite_depth_flag) {
    if (omega <= 0 || g <= 0) throw Error(ErrorCode::BadConfig, "need omega > 0, g > 0");
    WaveParameters p;
    p.omega = omega;
    p.k = k;
    p.g = g;
    p.nu = omega * omega / g;
    if (k < 0 || k >= p.nu)
        throw Error(ErrorCode::ObliqueAngleTooLarge, "need 0 <= k < nu");
    p.ell = std::sqrt((p.nu - k) * (p.nu + k));
    p.infinite_depth = infinite_depth_flag;
    p.depth = depth_h;
    if (depth_h <= 0) throw Error(ErrorCode::BadConfig, "depth must be positive");
    p.kappa0 = solve_dispersion(p.nu, depth_h);
    if (p.kappa0 <= k)
        throw Error(ErrorCode::CutOff, "propagating mode is cut off (kappa0 <= k)");
    p.ell0 = std::sqrt((p.kappa0 - k) * (p.kappa0 + k));
    // the literal finite-depth relation l0 tanh(l0 h) = ell; at k = 0 it
    // coincides with ell0 above, otherwise the discrepancy is reported
    p.ell0_paper = solve_dispersion(p.ell, depth_h);
    p.ell0_discrepancy = std::abs(p.ell0 - p.ell0_paper) / p.ell0;
    return p;
}

double VerticalMode::eval(double y, double h) const {
    return propagating ? norm_c * std::cosh(kappa * (y + h))
                       : norm_c * std::cos(kappa * (y + h));
}

double VerticalMode::eval_dy(double y, double h) const {
    return propagating ? norm_c * kappa * std::sinh(kappa * (y + h))
                       : -norm_c * kappa * std::sin(kappa * (y + h));
}

std::vector<VerticalMode> vertical_modes(const WaveParameters& params, int M) {
    const double h = params.depth;
    std::vector<VerticalMode> modes;
    VerticalMode m0;
    m0.kappa = params.kappa0;
    m0.propagating = true;
    m0.x_rate = params.ell0;
    // int_{-h}^0 cosh^2(kappa (y+h)) dy = (h + sinh(2 kappa h)/(2 kappa)) / 2
    m0.norm_c = 1.0 / std::sqrt(0.5 * (h + std::sinh(2 * m0.kappa * h) / (2 * m0.kappa)));
    modes.push_back(m0);
    for (int n = 1; n <= M; ++n) {
        VerticalMode mn;
        mn.kappa = solve_evanescent(params.nu, h, n);
        mn.propagating = false;
        mn.x_rate = std::sqrt(mn.kappa * mn.kappa + params.k * params.k);
        mn.norm_c =
            1.0 / std::sqrt(0.5 * (h + std::sin(2 * mn.kappa * h) / (2 * mn.kappa)));
        modes.push_back(mn);
    }
    return modes;
}

BandClassification band_classifier(double lb) {
    if (lb < 0) throw Error(ErrorCode::BadConfig, "l*b must be nonnegative");
    BandClassification c;
    // evaluate the literal band inequalities; the floor only centers the
    // search so endpoint roundoff cannot shift the classification
    const int m0 = static_cast<int>(std::floor(lb / M_PI));
    for (int m = std::max(0, m0 - 1); m <= m0 + 1; ++m) {
        if (M_PI * m <= lb && lb <= M_PI * (2 * m + 1) / 2.0 && !c.omega_minus) {
            c.omega_minus = true;
            c.m = m;
        }
        if (M_PI * (2 * m + 1) / 2.0 <= lb && lb <= M_PI * (m + 1) && !c.omega_plus) {
            c.omega_plus = true;
            if (!c.omega_minus) c.m = m;
        }
    }
    return c;
}

BandClassification band_classifier(const WaveParameters& params, double half_spacing) {
    if (half_spacing <= 0) throw Error(ErrorCode::BadConfig, "half spacing must be positive");
    const double l = params.infinite_depth ? params.ell : params.ell0;
    return band_classifier(l * half_spacing);
}

} // namespace floatwave
