#include "floatwave/coupled.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <Eigen/SVD>

namespace floatwave {

const char* to_string(MotionRestriction m) {
    switch (m) {
        case MotionRestriction::Full: return "full";
        case MotionRestriction::Sway: return "sway";
        case MotionRestriction::Heave: return "heave";
        case MotionRestriction::Roll: return "roll";
    }
    return "?";
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::Any: return "any";
        case Parity::Odd: return "odd";
        case Parity::Even: return "even";
    }
    return "?";
}

double effective_depth(double nu, double max_draft) {
    return std::max(10.0 / nu, 3.0 * max_draft);
}

NeumannData radiation_data(const Decomposition& dec, const WaveParameters& params, int j) {
    const double x0 = dec.centroid_of_mass.x;
    const double y0 = dec.centroid_of_mass.y;
    const double omega = params.omega;
    return [x0, y0, omega, j](const BoundaryEdge& e, const Point& p) -> Complex {
        if (e.tag != BoundaryTag::WETTED) return 0.0;
        double N;
        switch (j) {
            case 0: N = e.nx; break;
            case 1: N = e.ny; break;
            default: N = (p.x - x0) * e.ny - (p.y - y0) * e.nx; break;
        }
        return Complex(omega * N, 0.0);
    };
}

namespace {

std::vector<int> active_indices(MotionRestriction r) {
    switch (r) {
        case MotionRestriction::Full: return {0, 1, 2};
        case MotionRestriction::Sway: return {0};
        case MotionRestriction::Heave: return {1};
        case MotionRestriction::Roll: return {2};
    }
    return {};
}

} // namespace

RadiationSet radiation_set(const FieldProblem& problem, const Decomposition& dec,
                           MotionRestriction restriction) {
    const auto& params = problem.params();
    RadiationSet rs;
    rs.active = active_indices(restriction);

    // moment vectors m_i with (m_i)_n = int_S psi_n N_i ds; the radiation
    // right-hand side is omega * m_j and the reaction integral is m_i . phi_j
    std::vector<NeumannData> data(3);
    std::vector<CVec> m(3);
    for (int i = 0; i < 3; ++i) {
        data[static_cast<std::size_t>(i)] = radiation_data(dec, params, i);
        m[static_cast<std::size_t>(i)] =
            problem.rhs_from_neumann(data[static_cast<std::size_t>(i)]) / params.omega;
    }

    for (int j : rs.active) {
        FieldSolution sol = problem.solve(m[static_cast<std::size_t>(j)] * params.omega,
                                          &data[static_cast<std::size_t>(j)]);
        for (int i = 0; i < 3; ++i)
            rs.reaction(i, j) = bilinear_dot(m[static_cast<std::size_t>(i)], sol.phi);
        rs.phi.push_back(std::move(sol));
    }

    const double omega = params.omega;
    for (int j : rs.active)
        for (int i = 0; i < 3; ++i) {
            const Complex ab = rs.reaction(i, j) / omega; // a_ij + i b_ij
            rs.added_mass(i, j) = -ab.real();
            rs.damping(i, j) = ab.imag();
        }
    return rs;
}

CoupledMatrix coupled_matrix(const RadiationSet& radset, const HydrostaticModel& model,
                             const WaveParameters& params) {
    CoupledMatrix cm;
    cm.active = radset.active;
    const double w2 = params.omega * params.omega;
    Eigen::Matrix3cd T = -w2 * model.E.cast<Complex>() + params.g * model.K.cast<Complex>() -
                         params.omega * radset.reaction;
    cm.T = T;

    const int na = static_cast<int>(cm.active.size());
    Eigen::MatrixXcd block(na, na);
    double scale = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const int ai = cm.active[static_cast<std::size_t>(i)];
            const int aj = cm.active[static_cast<std::size_t>(j)];
            block(i, j) = T(ai, aj);
            scale += std::pow(w2 * model.E(ai, aj), 2) + std::pow(params.g * model.K(ai, aj), 2) +
                     std::norm(params.omega * radset.reaction(ai, aj));
        }
    cm.scale = std::sqrt(scale);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block, Eigen::ComputeFullV);
    cm.sigma_min = svd.singularValues().minCoeff();
    const Eigen::VectorXcd v = svd.matrixV().col(na - 1);
    for (int i = 0; i < na; ++i)
        cm.null_vector(cm.active[static_cast<std::size_t>(i)]) = v(i);
    return cm;
}

Complex incident_potential(const WaveParameters& params, const Point& p) {
    const double h = params.depth;
    const double c = std::cosh(params.kappa0 * (p.y + h)) / std::cosh(params.kappa0 * h);
    return c * std::exp(Complex(0.0, params.ell0 * p.x));
}

namespace {

Complex incident_normal_derivative(const WaveParameters& params, const BoundaryEdge& e,
                                   const Point& p) {
    const double h = params.depth;
    const Complex ex = std::exp(Complex(0.0, params.ell0 * p.x));
    const Complex dx = Complex(0.0, params.ell0) *
                       (std::cosh(params.kappa0 * (p.y + h)) / std::cosh(params.kappa0 * h)) * ex;
    const Complex dy =
        params.kappa0 * (std::sinh(params.kappa0 * (p.y + h)) / std::cosh(params.kappa0 * h)) * ex;
    return e.nx * dx + e.ny * dy;
}

} // namespace

ScatterResult solve_scattering(const FieldProblem& problem, const Decomposition& dec,
                               const HydrostaticModel& model) {
    const auto& params = problem.params();
    ScatterResult res;
    const double l0xT = params.ell0 * problem.mesh().x_trunc;
    const double alpha = 1.0 / (problem.modes()[0].norm_c * std::cosh(params.kappa0 * params.depth));
    res.incident_amp = alpha;

    const bool has_body = !dec.parts.empty();

    // diffraction data: cancel the incident normal velocity on S
    NeumannData qdiff = [&params](const BoundaryEdge& e, const Point& p) -> Complex {
        if (e.tag != BoundaryTag::WETTED) return 0.0;
        return -incident_normal_derivative(params, e, p);
    };

    Eigen::Vector3cd z = Eigen::Vector3cd::Zero();
    CVec rhs_total;
    NeumannData data_total;
    if (has_body) {
        const CVec rhs_d = problem.rhs_from_neumann(qdiff);
        FieldSolution phi_d = problem.solve(rhs_d, &qdiff);

        RadiationSet rad = radiation_set(problem, dec, MotionRestriction::Full);
        res.matrix = coupled_matrix(rad, model, params);
        if (res.matrix.sigma_min < 1e-10 * res.matrix.scale)
            throw Error(ErrorCode::NearlySingularT,
                        "coupled matrix nearly singular (possible motion resonance)");

        // exciting force F_i = omega int_S (phi_inc + phi_D) N_i ds
        std::vector<CVec> m(3);
        Eigen::Vector3cd F;
        for (int i = 0; i < 3; ++i) {
            NeumannData ni = radiation_data(dec, params, i);
            m[static_cast<std::size_t>(i)] = problem.rhs_from_neumann(ni) / params.omega;
            // int_S phi_inc N_i by quadrature against the same hat weights
            Complex inc = 0.0;
            const auto& mesh = problem.mesh();
            for (std::size_t nidx = 0; nidx < mesh.nodes.size(); ++nidx) {
                const Complex w = m[static_cast<std::size_t>(i)][static_cast<long>(nidx)];
                if (w != Complex(0.0, 0.0))
                    inc += w * incident_potential(params, mesh.nodes[nidx]);
            }
            F(i) = params.omega *
                   (inc + bilinear_dot(m[static_cast<std::size_t>(i)], phi_d.phi));
        }
        res.exciting_force = F;

        // restricted solve of T z = F on the active (all) indices
        z = res.matrix.T.fullPivLu().solve(F);
        res.z = z;

        const double omega = params.omega;
        const Decomposition* decp = &dec;
        data_total = [decp, &params, z, omega, qdiff](const BoundaryEdge& e, const Point& p) -> Complex {
            if (e.tag != BoundaryTag::WETTED) return 0.0;
            Complex q = qdiff(e, p);
            const double x0 = decp->centroid_of_mass.x;
            const double y0 = decp->centroid_of_mass.y;
            const double N[3] = {e.nx, e.ny, (p.x - x0) * e.ny - (p.y - y0) * e.nx};
            for (int j = 0; j < 3; ++j) q += omega * N[j] * z(j);
            return q;
        };
        rhs_total = problem.rhs_from_neumann(data_total);
        res.total_field = problem.solve(rhs_total, &data_total);
    } else {
        res.total_field = problem.postprocess(CVec::Zero(static_cast<long>(problem.mesh().nodes.size())));
    }

    const Complex phase = std::exp(Complex(0.0, -l0xT));
    res.reflection = res.total_field.farfield.a_minus * phase / alpha;
    res.transmission = 1.0 + res.total_field.farfield.a_plus * phase / alpha;
    res.energy_defect =
        std::abs(std::norm(res.reflection) + std::norm(res.transmission) - 1.0);
    return res;
}

std::vector<ScanRow> trapped_mode_scan(const BodySection& body, const Decomposition& dec,
                                       const HydrostaticModel& model,
                                       const WaterConfig& water, const ScanGrid& grid,
                                       const ScanOptions& options) {
    std::vector<ScanRow> rows(grid.omegas.size());

    // finite depth: one mesh serves all frequencies
    Mesh shared_mesh;
    bool have_shared = false;
    if (!water.infinite_depth) {
        shared_mesh = generate_mesh(&dec, water.depth, options.mesh);
        have_shared = true;
    }

    auto run_one = [&](std::size_t idx) {
        ScanRow& row = rows[idx];
        row.omega = grid.omegas[idx];
        try {
            const double nu = row.omega * row.omega / water.gravity;
            const double k = grid.k_frac >= 0 ? grid.k_frac * nu : grid.k;
            const double depth = water.infinite_depth
                                     ? effective_depth(nu, dec.max_draft)
                                     : water.depth;
            WaveParameters params = make_wave_parameters(row.omega, k, water.gravity, depth,
                                                         water.infinite_depth);
            row.nu = params.nu;
            row.ell = params.ell;
            row.ell0 = params.ell0;

            const Mesh local = have_shared ? Mesh{} : generate_mesh(&dec, depth, options.mesh);
            const Mesh& mesh = have_shared ? shared_mesh : local;

            SolverConfig scfg;
            scfg.n_modes = options.n_modes;
            FieldProblem problem(mesh, params, scfg, options.parity);
            RadiationSet rad = radiation_set(problem, dec, options.restriction);
            CoupledMatrix cm = coupled_matrix(rad, model, params);
            row.sigma_ratio = cm.sigma_min / std::max(cm.scale, 1e-300);

            // radiated flux of the candidate null vector vs its kinetic energy
            CVec phi_v = CVec::Zero(static_cast<long>(mesh.nodes.size()));
            for (std::size_t jj = 0; jj < rad.active.size(); ++jj)
                phi_v += cm.null_vector(rad.active[jj]) * rad.phi[jj].phi;
            FieldSolution combo = problem.postprocess(phi_v);
            const double flux = params.ell0 * (std::norm(combo.farfield.a_plus) +
                                               std::norm(combo.farfield.a_minus));
            row.flux_ratio = flux / std::max(combo.kinetic, 1e-300);
            row.flagged = row.sigma_ratio < options.sigma_threshold &&
                          row.flux_ratio < options.flux_threshold;
        } catch (const Error& err) {
            row.error = err.what();
        }
    };

    int workers = 1;
    if (const char* env = std::getenv("FLOATWAVE_WORKERS")) workers = std::atoi(env);
    workers = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));

    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mu;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        if (next >= rows.size()) return;
                        i = next++;
                    }
                    run_one(i);
                }
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

} // namespace floatwave
