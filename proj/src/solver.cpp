#include "floatwave/solver.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace floatwave {

namespace {

// 5-point Gauss-Legendre on [0,1]
const double kGaussX[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                           0.76923465505284155, 0.95308992296933200};
const double kGaussW[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                           0.23931433524968324, 0.11846344252809454};

} // namespace

FieldProblem::FieldProblem(const Mesh& mesh, const WaveParameters& params,
                           const SolverConfig& config, Parity parity)
    : mesh_(mesh), params_(params), config_(config), parity_(parity) {
    if (parity_ != Parity::Any && !mesh_.symmetric)
        throw Error(ErrorCode::BadConfig, "parity restriction needs a mirror-symmetric mesh");
    modes_ = vertical_modes(params_, config_.n_modes);
    build_mode_weights();
    assemble();
    factorize();
}

void FieldProblem::build_mode_weights() {
    const int n = static_cast<int>(mesh_.nodes.size());
    const double h = params_.depth;
    auto weights_for = [&](BoundaryTag tag) {
        std::vector<Eigen::VectorXd> ws(modes_.size(), Eigen::VectorXd::Zero(n));
        for (const auto& e : mesh_.boundary_edges) {
            if (e.tag != tag) continue;
            const Point& pa = mesh_.nodes[static_cast<std::size_t>(e.a)];
            const Point& pb = mesh_.nodes[static_cast<std::size_t>(e.b)];
            const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
            for (int q = 0; q < 5; ++q) {
                const double t = kGaussX[q];
                const double y = pa.y + t * (pb.y - pa.y);
                const double wq = kGaussW[q] * len;
                for (std::size_t m = 0; m < modes_.size(); ++m) {
                    const double f = modes_[m].eval(y, h);
                    ws[m][e.a] += wq * f * (1.0 - t);
                    ws[m][e.b] += wq * f * t;
                }
            }
        }
        return ws;
    };
    wL_ = weights_for(BoundaryTag::TRUNC_LEFT);
    wR_ = weights_for(BoundaryTag::TRUNC_RIGHT);
}

void FieldProblem::assemble() {
    const int n = static_cast<int>(mesh_.nodes.size());
    const double k2 = params_.k * params_.k;
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(mesh_.triangles.size() * 9 + 4 * mesh_.boundary_edges.size());

    for (const auto& tr : mesh_.triangles) {
        const Point& p0 = mesh_.nodes[static_cast<std::size_t>(tr[0])];
        const Point& p1 = mesh_.nodes[static_cast<std::size_t>(tr[1])];
        const Point& p2 = mesh_.nodes[static_cast<std::size_t>(tr[2])];
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
        const double area = 0.5 * det;
        const double b[3] = {(p1.y - p2.y) / det, (p2.y - p0.y) / det, (p0.y - p1.y) / det};
        const double c[3] = {(p2.x - p1.x) / det, (p0.x - p2.x) / det, (p1.x - p0.x) / det};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double kij = area * (b[i] * b[j] + c[i] * c[j]);
                const double mij = area / 12.0 * (i == j ? 2.0 : 1.0);
                trips.emplace_back(tr[static_cast<std::size_t>(i)],
                                   tr[static_cast<std::size_t>(j)],
                                   Complex(kij + k2 * mij, 0.0));
            }
    }

    // free-surface term, edge-lumped
    for (const auto& e : mesh_.boundary_edges) {
        if (e.tag != BoundaryTag::FREE_SURFACE) continue;
        const Point& pa = mesh_.nodes[static_cast<std::size_t>(e.a)];
        const Point& pb = mesh_.nodes[static_cast<std::size_t>(e.b)];
        const double half = 0.5 * std::hypot(pb.x - pa.x, pb.y - pa.y);
        trips.emplace_back(e.a, e.a, Complex(-params_.nu * half, 0.0));
        trips.emplace_back(e.b, e.b, Complex(-params_.nu * half, 0.0));
    }

    A_.resize(n, n);
    A_.setFromTriplets(trips.begin(), trips.end());

    // modal DtN closure: subtract  i l0 w0 w0^T - sum_n gamma_n wn wn^T
    auto add_dtn = [&](const std::vector<Eigen::VectorXd>& ws, const std::vector<int>& line) {
        if (line.empty()) return;
        std::vector<Eigen::Triplet<Complex>> dt;
        for (std::size_t m = 0; m < modes_.size(); ++m) {
            const Complex s = modes_[m].propagating
                                  ? Complex(0.0, modes_[m].x_rate)
                                  : Complex(-modes_[m].x_rate, 0.0);
            for (int i : line)
                for (int j : line) {
                    const double wij = ws[m][i] * ws[m][j];
                    if (wij != 0.0) dt.emplace_back(i, j, -s * wij);
                }
        }
        CSparse D(n, n);
        D.setFromTriplets(dt.begin(), dt.end());
        A_ += D;
    };
    if (config_.dtn_left) add_dtn(wL_, mesh_.trunc_left);
    if (config_.dtn_right) add_dtn(wR_, mesh_.trunc_right);

    // parity reduction operator
    if (parity_ == Parity::Any) {
        P_.resize(n, n);
        P_.setIdentity();
    } else {
        std::vector<int> master(static_cast<std::size_t>(n), -1);
        int nm = 0;
        std::vector<Eigen::Triplet<double>> pt;
        for (int i = 0; i < n; ++i) {
            const int mi = mesh_.mirror[static_cast<std::size_t>(i)];
            if (mi == i) { // axis node
                if (parity_ == Parity::Even) {
                    pt.emplace_back(i, nm, 1.0);
                    ++nm;
                } // odd: phi = 0 on the axis
            } else if (mi > i) {
                pt.emplace_back(i, nm, 1.0);
                pt.emplace_back(mi, nm, parity_ == Parity::Even ? 1.0 : -1.0);
                ++nm;
            }
        }
        (void)master;
        P_.resize(n, nm);
        P_.setFromTriplets(pt.begin(), pt.end());
    }
}

void FieldProblem::factorize() {
    CSparse Ared;
    if (parity_ == Parity::Any) {
        Ared = A_;
    } else {
        CSparse Pc = P_.cast<Complex>();
        Ared = Pc.transpose() * A_ * Pc;
    }
    Ared.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<CSparse>>();
    lu_->compute(Ared);
    if (lu_->info() != Eigen::Success)
        throw Error(ErrorCode::SingularSystem, "sparse LU factorization failed");
}

CVec FieldProblem::rhs_from_neumann(const NeumannData& data) const {
    const int n = static_cast<int>(mesh_.nodes.size());
    CVec b = CVec::Zero(n);
    for (const auto& e : mesh_.boundary_edges) {
        const Point& pa = mesh_.nodes[static_cast<std::size_t>(e.a)];
        const Point& pb = mesh_.nodes[static_cast<std::size_t>(e.b)];
        const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
        for (int q = 0; q < 5; ++q) {
            const double t = kGaussX[q];
            const Point p{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
            const Complex v = data(e, p);
            if (v == Complex(0.0, 0.0)) continue;
            const double wq = kGaussW[q] * len;
            b[e.a] += wq * v * (1.0 - t);
            b[e.b] += wq * v * t;
        }
    }
    return b;
}

FieldSolution FieldProblem::solve(const CVec& rhs, const NeumannData* data) const {
    CVec phi;
    if (parity_ == Parity::Any) {
        phi = lu_->solve(rhs);
    } else {
        CSparse Pc = P_.cast<Complex>();
        CVec br = Pc.transpose() * rhs;
        CVec xr = lu_->solve(br);
        phi = Pc * xr;
    }
    if (lu_->info() != Eigen::Success)
        throw Error(ErrorCode::SingularSystem, "sparse solve failed");
    return postprocess(phi, data);
}

FieldSolution FieldProblem::postprocess(const CVec& phi, const NeumannData* data) const {
    FieldSolution sol;
    sol.params = params_;
    sol.phi = phi;

    // far-field modal projection of the trace
    sol.farfield.coeffs_left.resize(modes_.size());
    sol.farfield.coeffs_right.resize(modes_.size());
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        Complex cl = 0.0, cr = 0.0;
        for (int i : mesh_.trunc_left) cl += wL_[m][i] * phi[i];
        for (int i : mesh_.trunc_right) cr += wR_[m][i] * phi[i];
        sol.farfield.coeffs_left[m] = cl;
        sol.farfield.coeffs_right[m] = cr;
        if (!modes_[m].propagating)
            sol.farfield.evanescent_flux +=
                modes_[m].x_rate * (std::norm(cl) + std::norm(cr));
    }
    sol.farfield.a_minus = sol.farfield.coeffs_left[0];
    sol.farfield.a_plus = sol.farfield.coeffs_right[0];

    // propagating-mode projection on interior columns halfway between the
    // body and each truncation line (evanescent modes are L2-orthogonal to
    // the mode, so their contamination is only a quadrature effect)
    {
        double body_lo = 0.0, body_hi = 0.0;
        bool has_body = false;
        for (const auto& e : mesh_.boundary_edges) {
            if (e.tag != BoundaryTag::WETTED) continue;
            const double xa = mesh_.nodes[static_cast<std::size_t>(e.a)].x;
            const double xb = mesh_.nodes[static_cast<std::size_t>(e.b)].x;
            if (!has_body) {
                body_lo = std::min(xa, xb);
                body_hi = std::max(xa, xb);
                has_body = true;
            } else {
                body_lo = std::min({body_lo, xa, xb});
                body_hi = std::max({body_hi, xa, xb});
            }
        }
        if (!has_body) {
            body_lo = 0.0;
            body_hi = 0.0;
        }
        const double target_l = 0.5 * (-mesh_.x_trunc + body_lo);
        const double target_r = 0.5 * (mesh_.x_trunc + body_hi);
        const double ytol = 1e-9 * mesh_.depth;
        int best_l = -1, best_r = -1;
        for (std::size_t li = 0; li < mesh_.line_x.size(); ++li) {
            const auto& ids = mesh_.line_nodes[li];
            if (ids.size() < 2) continue;
            const double ytop = mesh_.nodes[static_cast<std::size_t>(ids.back())].y;
            const double ybot = mesh_.nodes[static_cast<std::size_t>(ids.front())].y;
            if (std::abs(ytop) > ytol || std::abs(ybot + mesh_.depth) > ytol) continue;
            const double x = mesh_.line_x[li];
            if (std::abs(x - mesh_.x_trunc) < ytol || std::abs(x + mesh_.x_trunc) < ytol)
                continue;
            if (x < body_lo &&
                (best_l < 0 ||
                 std::abs(x - target_l) < std::abs(mesh_.line_x[static_cast<std::size_t>(best_l)] - target_l)))
                best_l = static_cast<int>(li);
            if (x > body_hi &&
                (best_r < 0 ||
                 std::abs(x - target_r) < std::abs(mesh_.line_x[static_cast<std::size_t>(best_r)] - target_r)))
                best_r = static_cast<int>(li);
        }
        if (best_l >= 0 && best_r >= 0) {
            double fi = 0.0;
            for (int side = 0; side < 2; ++side) {
                const auto& ids =
                    mesh_.line_nodes[static_cast<std::size_t>(side ? best_r : best_l)];
                Complex c = 0.0;
                for (std::size_t j = 0; j + 1 < ids.size(); ++j) {
                    const Point& lo = mesh_.nodes[static_cast<std::size_t>(ids[j])];
                    const Point& hi = mesh_.nodes[static_cast<std::size_t>(ids[j + 1])];
                    const Complex flo = phi[ids[j]] * modes_[0].eval(lo.y, mesh_.depth);
                    const Complex fhi = phi[ids[j + 1]] * modes_[0].eval(hi.y, mesh_.depth);
                    c += 0.5 * (hi.y - lo.y) * (flo + fhi);
                }
                fi += std::norm(c);
            }
            sol.farfield.flux_interior = params_.ell0 * fi;
        }
    }

    // energy functionals by element quadrature
    const double k2 = params_.k * params_.k;
    double kin = 0.0;
    for (const auto& tr : mesh_.triangles) {
        const Point& p0 = mesh_.nodes[static_cast<std::size_t>(tr[0])];
        const Point& p1 = mesh_.nodes[static_cast<std::size_t>(tr[1])];
        const Point& p2 = mesh_.nodes[static_cast<std::size_t>(tr[2])];
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
        const double area = 0.5 * det;
        const double b[3] = {(p1.y - p2.y) / det, (p2.y - p0.y) / det, (p0.y - p1.y) / det};
        const double c[3] = {(p2.x - p1.x) / det, (p0.x - p2.x) / det, (p1.x - p0.x) / det};
        Complex gx = 0.0, gy = 0.0;
        for (int i = 0; i < 3; ++i) {
            gx += phi[tr[static_cast<std::size_t>(i)]] * b[i];
            gy += phi[tr[static_cast<std::size_t>(i)]] * c[i];
        }
        kin += area * (std::norm(gx) + std::norm(gy));
        // midpoint rule for the mass part
        for (int e = 0; e < 3; ++e) {
            const Complex vm = 0.5 * (phi[tr[static_cast<std::size_t>(e)]] +
                                      phi[tr[static_cast<std::size_t>((e + 1) % 3)]]);
            kin += k2 * area / 3.0 * std::norm(vm);
        }
    }
    sol.kinetic = kin;

    // exact for the P1 trace (the assembled free-surface term is lumped, so
    // the difference seen by the energy audits is the lumping error)
    double pot = 0.0;
    for (const auto& e : mesh_.boundary_edges) {
        if (e.tag != BoundaryTag::FREE_SURFACE) continue;
        const Point& pa = mesh_.nodes[static_cast<std::size_t>(e.a)];
        const Point& pb = mesh_.nodes[static_cast<std::size_t>(e.b)];
        const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
        pot += len / 6.0 *
               (std::norm(phi[e.a]) + std::norm(phi[e.b]) +
                std::norm(phi[e.a] + phi[e.b]));
    }
    sol.potential_fs = params_.nu * pot;

    {
        std::map<std::pair<int, int>, int> owner;
        for (std::size_t t = 0; t < mesh_.triangles.size(); ++t)
            for (int e = 0; e < 3; ++e) {
                int u = mesh_.triangles[t][static_cast<std::size_t>(e)];
                int v = mesh_.triangles[t][static_cast<std::size_t>((e + 1) % 3)];
                owner[{std::min(u, v), std::max(u, v)}] = static_cast<int>(t);
            }
        Complex rec = 0.0;
        for (const auto& e : mesh_.boundary_edges) {
            if (e.tag != BoundaryTag::WETTED) continue;
            const auto it = owner.find({std::min(e.a, e.b), std::max(e.a, e.b)});
            if (it == owner.end()) continue;
            const auto& tr = mesh_.triangles[static_cast<std::size_t>(it->second)];
            const Point& p0 = mesh_.nodes[static_cast<std::size_t>(tr[0])];
            const Point& p1 = mesh_.nodes[static_cast<std::size_t>(tr[1])];
            const Point& p2 = mesh_.nodes[static_cast<std::size_t>(tr[2])];
            const double det =
                (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
            const double b[3] = {(p1.y - p2.y) / det, (p2.y - p0.y) / det,
                                 (p0.y - p1.y) / det};
            const double c[3] = {(p2.x - p1.x) / det, (p0.x - p2.x) / det,
                                 (p1.x - p0.x) / det};
            Complex gx = 0.0, gy = 0.0;
            for (int i = 0; i < 3; ++i) {
                gx += phi[tr[static_cast<std::size_t>(i)]] * b[i];
                gy += phi[tr[static_cast<std::size_t>(i)]] * c[i];
            }
            const Point& pa = mesh_.nodes[static_cast<std::size_t>(e.a)];
            const Point& pb = mesh_.nodes[static_cast<std::size_t>(e.b)];
            const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
            const Complex dn = e.nx * gx + e.ny * gy;
            rec += len * 0.5 * std::conj(phi[e.a] + phi[e.b]) * dn;
        }
        sol.wetted_flux_recovered = rec;
    }

    if (data) {
        Complex sw = 0.0, ew = 0.0;
        for (const auto& e : mesh_.boundary_edges) {
            const Point& pa = mesh_.nodes[static_cast<std::size_t>(e.a)];
            const Point& pb = mesh_.nodes[static_cast<std::size_t>(e.b)];
            const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
            Complex acc = 0.0;
            for (int q = 0; q < 5; ++q) {
                const double t = kGaussX[q];
                const Point p{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
                const Complex v = (*data)(e, p);
                if (v == Complex(0.0, 0.0)) continue;
                const Complex tr = (1.0 - t) * phi[e.a] + t * phi[e.b];
                acc += kGaussW[q] * len * std::conj(tr) * v;
            }
            if (e.tag == BoundaryTag::WETTED)
                sw += acc;
            else
                ew += acc;
        }
        sol.wetted_work = sw;
        sol.external_work = ew;
    }
    return sol;
}

double FieldProblem::l2_error(const CVec& phi,
                              const std::function<Complex(const Point&)>& exact) const {
    double err = 0.0;
    for (const auto& tr : mesh_.triangles) {
        const Point& p0 = mesh_.nodes[static_cast<std::size_t>(tr[0])];
        const Point& p1 = mesh_.nodes[static_cast<std::size_t>(tr[1])];
        const Point& p2 = mesh_.nodes[static_cast<std::size_t>(tr[2])];
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
        const double area = 0.5 * det;
        const Point pts[3] = {{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)},
                              {0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)},
                              {0.5 * (p2.x + p0.x), 0.5 * (p2.y + p0.y)}};
        const Complex vals[3] = {
            0.5 * (phi[tr[0]] + phi[tr[1]]),
            0.5 * (phi[tr[1]] + phi[tr[2]]),
            0.5 * (phi[tr[2]] + phi[tr[0]]),
        };
        for (int q = 0; q < 3; ++q)
            err += area / 3.0 * std::norm(vals[q] - exact(pts[q]));
    }
    return std::sqrt(err);
}

double FieldProblem::l2_norm(const std::function<Complex(const Point&)>& exact) const {
    double s = 0.0;
    for (const auto& tr : mesh_.triangles) {
        const Point& p0 = mesh_.nodes[static_cast<std::size_t>(tr[0])];
        const Point& p1 = mesh_.nodes[static_cast<std::size_t>(tr[1])];
        const Point& p2 = mesh_.nodes[static_cast<std::size_t>(tr[2])];
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
        const double area = 0.5 * det;
        const Point pts[3] = {{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)},
                              {0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)},
                              {0.5 * (p2.x + p0.x), 0.5 * (p2.y + p0.y)}};
        for (int q = 0; q < 3; ++q) s += area / 3.0 * std::norm(exact(pts[q]));
    }
    return std::sqrt(s);
}

} // namespace floatwave
