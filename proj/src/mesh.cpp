#include "floatwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace floatwave {

const char* to_string(BoundaryTag t) {
    switch (t) {
        case BoundaryTag::FREE_SURFACE: return "FREE_SURFACE";
        case BoundaryTag::WETTED: return "WETTED";
        case BoundaryTag::BOTTOM: return "BOTTOM";
        case BoundaryTag::TRUNC_LEFT: return "TRUNC_LEFT";
        case BoundaryTag::TRUNC_RIGHT: return "TRUNC_RIGHT";
    }
    return "?";
}

double Mesh::triangle_area(int t) const {
    const auto& tr = triangles[static_cast<std::size_t>(t)];
    const Point &a = nodes[static_cast<std::size_t>(tr[0])],
                &b = nodes[static_cast<std::size_t>(tr[1])],
                &c = nodes[static_cast<std::size_t>(tr[2])];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double Mesh::min_angle_deg() const {
    double amin = 180.0;
    for (const auto& tr : triangles) {
        for (int v = 0; v < 3; ++v) {
            const Point& p = nodes[static_cast<std::size_t>(tr[static_cast<std::size_t>(v)])];
            const Point& q = nodes[static_cast<std::size_t>(tr[static_cast<std::size_t>((v + 1) % 3)])];
            const Point& r = nodes[static_cast<std::size_t>(tr[static_cast<std::size_t>((v + 2) % 3)])];
            const double ux = q.x - p.x, uy = q.y - p.y;
            const double vx = r.x - p.x, vy = r.y - p.y;
            const double dot = ux * vx + uy * vy;
            const double det = ux * vy - uy * vx;
            amin = std::min(amin, std::abs(std::atan2(det, dot)) * 180.0 / M_PI);
        }
    }
    return amin;
}

namespace {

struct Curve {
    // y(x) = y0 + slope * (x - xref); kind: 0 bottom, 1 surface, 2 body edge
    int kind = 0;
    double xref = 0.0, y0 = 0.0, slope = 0.0;
    int part = -1, segment = -1;
    double eval(double x) const { return y0 + slope * (x - xref); }
};

struct Gap {
    Curve bot;
    Curve top;
};

struct Grader {
    std::vector<Point> corners;
    double h = 0.1;
    double refine = 4.0;
    double grade_len = 0.5;

    double target(double x, double y) const {
        if (corners.empty() || refine <= 1.0) return h;
        double d = 1e300;
        for (const Point& c : corners) d = std::min(d, std::hypot(x - c.x, y - c.y));
        const double f = std::min(1.0, d / grade_len);
        return h * (1.0 / refine + (1.0 - 1.0 / refine) * f);
    }
};

// graded subdivision of [a, b]: equal increments of the integral of 1/target
std::vector<double> graded_fill(double a, double b, const Grader& g,
                                bool vertical, double fixed_coord) {
    const int samples = 64;
    std::vector<double> cum(samples + 1, 0.0);
    const double dx = (b - a) / samples;
    for (int i = 0; i < samples; ++i) {
        const double x = a + (i + 0.5) * dx;
        const double t = vertical ? g.target(fixed_coord, x) : g.target(x, 0.0);
        cum[static_cast<std::size_t>(i + 1)] = cum[static_cast<std::size_t>(i)] + dx / t;
    }
    const double total = cum[samples];
    const int n = std::max(1, static_cast<int>(std::ceil(total - 1e-9)));
    std::vector<double> pts;
    pts.push_back(a);
    int seg = 0;
    for (int i = 1; i < n; ++i) {
        const double s = total * i / n;
        while (seg < samples && cum[static_cast<std::size_t>(seg + 1)] < s) ++seg;
        const double s0 = cum[static_cast<std::size_t>(seg)];
        const double s1 = cum[static_cast<std::size_t>(seg + 1)];
        const double u = (s - s0) / std::max(s1 - s0, 1e-300);
        pts.push_back(a + (seg + u) * dx);
    }
    pts.push_back(b);
    return pts;
}

std::vector<Gap> slab_gaps(const Decomposition* dec, double xm, double depth) {
    struct Crossing {
        double y;
        Curve curve;
    };
    std::vector<Crossing> crossings;
    if (dec) {
        for (std::size_t pi = 0; pi < dec->parts.size(); ++pi) {
            const Polygon& poly = dec->parts[pi].polygon;
            const std::size_t n = poly.size();
            for (std::size_t e = 0; e < n; ++e) {
                const Point& a = poly[e];
                const Point& b = poly[(e + 1) % n];
                if ((a.x < xm) == (b.x < xm)) continue; // does not straddle xm
                Curve c;
                c.kind = 2;
                c.xref = a.x;
                c.y0 = a.y;
                c.slope = (b.y - a.y) / (b.x - a.x);
                c.part = static_cast<int>(pi);
                c.segment = static_cast<int>(e);
                crossings.push_back({c.eval(xm), c});
            }
        }
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.y < b.y; });
    if (crossings.size() % 2 != 0)
        throw Error(ErrorCode::MeshQuality, "inconsistent body coverage in a slab");

    std::vector<Gap> gaps;
    Curve bottom{0, 0.0, -depth, 0.0, -1, -1};
    Curve surface{1, 0.0, 0.0, 0.0, -1, -1};
    Curve below = bottom;
    // walk covered intervals [y(2i), y(2i+1)] from the bottom up
    for (std::size_t i = 0; i + 1 < crossings.size() || i == 0; i += 2) {
        if (i >= crossings.size()) break;
        Gap g;
        g.bot = below;
        g.top = crossings[i].curve;
        if (crossings[i].y > -depth + 1e-12) gaps.push_back(g);
        below = crossings[i + 1].curve;
    }
    Gap last;
    last.bot = below;
    last.top = surface;
    const double ytop = crossings.empty() ? -depth : crossings.back().y;
    if (crossings.empty() || ytop < -1e-12) gaps.push_back(last);
    return gaps;
}

} // namespace

Mesh generate_mesh(const Decomposition* dec, double depth, const MeshConfig& config) {
    if (depth <= 0) throw Error(ErrorCode::BadConfig, "mesh depth must be positive");
    if (dec && dec->max_draft >= depth)
        throw Error(ErrorCode::BadConfig, "depth must exceed the maximum draft");
    const double h = config.h_mesh;
    if (h <= 0) throw Error(ErrorCode::BadConfig, "h_mesh must be positive");

    double a_extent = 0.0;
    if (dec)
        a_extent = std::max(std::abs(dec->free_surface_left_start),
                            std::abs(dec->free_surface_right_start));
    const double xT = config.x_trunc > 0 ? config.x_trunc : a_extent + 2.0 * depth;
    if (dec && xT < dec->free_surface_right_start)
        throw Error(ErrorCode::BadConfig, "truncation line intersects the body");

    Grader grader;
    grader.h = h;
    grader.refine = config.refine_factor;
    grader.grade_len = std::max(4.0 * h, 0.25);
    if (dec)
        for (const auto& part : dec->parts) {
            grader.corners.push_back({part.waterplane.lo, 0.0});
            grader.corners.push_back({part.waterplane.hi, 0.0});
        }

    const double snap = 1e-9 * std::max(xT, depth);

    // ---- x-lines: mandatory at truncation and at every contour vertex ----
    std::vector<double> mandatory;
    auto add_mandatory = [&](double x) {
        for (double m : mandatory)
            if (std::abs(m - x) < snap) return;
        mandatory.push_back(x);
    };
    const bool sym = config.symmetric;
    if (sym) {
        add_mandatory(0.0);
        add_mandatory(xT);
    } else {
        add_mandatory(-xT);
        add_mandatory(xT);
    }
    if (dec)
        for (const auto& part : dec->parts)
            for (const Point& q : part.polygon)
                if (!sym || q.x > -snap) add_mandatory(std::abs(q.x) < snap ? 0.0 : q.x);
    std::sort(mandatory.begin(), mandatory.end());

    std::vector<double> lines;
    for (std::size_t i = 0; i + 1 < mandatory.size(); ++i) {
        const auto pts = graded_fill(mandatory[i], mandatory[i + 1], grader, false, 0.0);
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) lines.push_back(pts[j]);
    }
    lines.push_back(mandatory.back());

    // ---- per-slab gaps and per-line anchors ----
    const std::size_t nl = lines.size();
    std::vector<std::vector<Gap>> slabs(nl - 1);
    std::vector<std::vector<double>> anchors(nl);
    for (std::size_t s = 0; s + 1 < nl; ++s) {
        const double xm = 0.5 * (lines[s] + lines[s + 1]);
        slabs[s] = slab_gaps(dec, xm, depth);
        for (const Gap& g : slabs[s]) {
            anchors[s].push_back(g.bot.eval(lines[s]));
            anchors[s].push_back(g.top.eval(lines[s]));
            anchors[s + 1].push_back(g.bot.eval(lines[s + 1]));
            anchors[s + 1].push_back(g.top.eval(lines[s + 1]));
        }
    }

    Mesh mesh;
    mesh.depth = depth;
    mesh.x_trunc = xT;
    mesh.symmetric = sym;

    // ---- per-line nodes: anchors plus graded subdivision between them ----
    std::vector<std::vector<double>> line_ys(nl);
    std::vector<std::vector<int>> line_idx(nl);
    for (std::size_t i = 0; i < nl; ++i) {
        auto& an = anchors[i];
        std::sort(an.begin(), an.end());
        an.erase(std::unique(an.begin(), an.end(),
                             [&](double a, double b) { return std::abs(a - b) < snap; }),
                 an.end());
        std::vector<double> ys;
        for (std::size_t j = 0; j + 1 < an.size(); ++j) {
            const auto pts = graded_fill(an[j], an[j + 1], grader, true, lines[i]);
            for (std::size_t t = 0; t + 1 < pts.size(); ++t) ys.push_back(pts[t]);
        }
        if (!an.empty()) ys.push_back(an.back());
        line_ys[i] = ys;
        for (double y : ys) {
            line_idx[i].push_back(static_cast<int>(mesh.nodes.size()));
            mesh.nodes.push_back({lines[i], y});
        }
    }

    auto chain_between = [&](std::size_t li, double ylo, double yhi) {
        std::vector<int> chain;
        const auto& ys = line_ys[li];
        for (std::size_t j = 0; j < ys.size(); ++j)
            if (ys[j] > ylo - snap && ys[j] < yhi + snap) chain.push_back(line_idx[li][j]);
        return chain;
    };

    // ---- zipper triangulation of every slab gap ----
    for (std::size_t s = 0; s + 1 < nl; ++s) {
        for (const Gap& g : slabs[s]) {
            const auto L = chain_between(s, g.bot.eval(lines[s]), g.top.eval(lines[s]));
            const auto R =
                chain_between(s + 1, g.bot.eval(lines[s + 1]), g.top.eval(lines[s + 1]));
            if (L.empty() || R.empty())
                throw Error(ErrorCode::MeshQuality, "empty chain in slab gap");
            std::size_t i = 0, j = 0;
            while (i + 1 < L.size() || j + 1 < R.size()) {
                bool adv_left;
                if (j + 1 >= R.size()) {
                    adv_left = true;
                } else if (i + 1 >= L.size()) {
                    adv_left = false;
                } else {
                    const Point& ln = mesh.nodes[static_cast<std::size_t>(L[i + 1])];
                    const Point& rn = mesh.nodes[static_cast<std::size_t>(R[j + 1])];
                    const Point& lc = mesh.nodes[static_cast<std::size_t>(L[i])];
                    const Point& rc = mesh.nodes[static_cast<std::size_t>(R[j])];
                    const double dl = std::hypot(ln.x - rc.x, ln.y - rc.y);
                    const double dr = std::hypot(rn.x - lc.x, rn.y - lc.y);
                    adv_left = dl <= dr;
                }
                if (adv_left) {
                    mesh.triangles.push_back({L[i], R[j], L[i + 1]});
                    ++i;
                } else {
                    mesh.triangles.push_back({L[i], R[j], R[j + 1]});
                    ++j;
                }
            }
        }
    }

    // ---- mirror the half mesh for symmetric configurations ----
    if (sym) {
        const std::size_t nhalf = mesh.nodes.size();
        mesh.mirror.assign(nhalf, -1);
        for (std::size_t i = 0; i < nhalf; ++i) {
            if (std::abs(mesh.nodes[i].x) < snap) {
                mesh.mirror[i] = static_cast<int>(i);
            } else {
                mesh.mirror[i] = static_cast<int>(mesh.nodes.size());
                mesh.nodes.push_back({-mesh.nodes[i].x, mesh.nodes[i].y});
                mesh.mirror.push_back(static_cast<int>(i));
            }
        }
        const std::size_t ntri = mesh.triangles.size();
        for (std::size_t t = 0; t < ntri; ++t) {
            const auto& tr = mesh.triangles[t];
            mesh.triangles.push_back({mesh.mirror[static_cast<std::size_t>(tr[0])],
                                      mesh.mirror[static_cast<std::size_t>(tr[2])],
                                      mesh.mirror[static_cast<std::size_t>(tr[1])]});
        }
        // mirrored x-lines for the column bookkeeping
        const std::size_t nlines0 = lines.size();
        for (std::size_t i = 0; i < nlines0; ++i) {
            if (std::abs(lines[i]) < snap) continue;
            lines.push_back(-lines[i]);
            std::vector<int> li;
            for (int idx : line_idx[i]) li.push_back(mesh.mirror[static_cast<std::size_t>(idx)]);
            line_idx.push_back(li);
        }
    }
    mesh.line_x = lines;
    mesh.line_nodes = line_idx;

    // ---- boundary edges ----
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tr : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = tr[static_cast<std::size_t>(e)];
            int b = tr[static_cast<std::size_t>((e + 1) % 3)];
            if (a > b) std::swap(a, b);
            edge_count[{a, b}]++;
        }
    const double snap_b = 1e2 * snap;
    for (const auto& [e, cnt] : edge_count) {
        if (cnt != 1) continue;
        BoundaryEdge be;
        be.a = e.first;
        be.b = e.second;
        const Point& pa = mesh.nodes[static_cast<std::size_t>(be.a)];
        const Point& pb = mesh.nodes[static_cast<std::size_t>(be.b)];
        if (std::abs(pa.y) < snap_b && std::abs(pb.y) < snap_b) {
            be.tag = BoundaryTag::FREE_SURFACE;
        } else if (std::abs(pa.y + depth) < snap_b && std::abs(pb.y + depth) < snap_b) {
            be.tag = BoundaryTag::BOTTOM;
        } else if (std::abs(pa.x + xT) < snap_b && std::abs(pb.x + xT) < snap_b) {
            be.tag = BoundaryTag::TRUNC_LEFT;
        } else if (std::abs(pa.x - xT) < snap_b && std::abs(pb.x - xT) < snap_b) {
            be.tag = BoundaryTag::TRUNC_RIGHT;
        } else {
            be.tag = BoundaryTag::WETTED;
            if (!dec) throw Error(ErrorCode::MeshQuality, "stray boundary edge in empty strip");
            const Point mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
            double best = 1e300;
            for (std::size_t pi = 0; pi < dec->parts.size(); ++pi) {
                const auto& segs = dec->parts[pi].wetted;
                for (std::size_t si = 0; si < segs.size(); ++si) {
                    const auto& sgm = segs[si];
                    const double dx = sgm.b.x - sgm.a.x, dy = sgm.b.y - sgm.a.y;
                    const double len2 = dx * dx + dy * dy;
                    double t = ((mid.x - sgm.a.x) * dx + (mid.y - sgm.a.y) * dy) / len2;
                    t = std::clamp(t, 0.0, 1.0);
                    const double d =
                        std::hypot(mid.x - (sgm.a.x + t * dx), mid.y - (sgm.a.y + t * dy));
                    if (d < best) {
                        best = d;
                        be.part = static_cast<int>(pi);
                        be.segment = static_cast<int>(si);
                        be.nx = sgm.nx;
                        be.ny = sgm.ny;
                    }
                }
            }
            if (best > 1e-6 * std::max(xT, depth))
                throw Error(ErrorCode::MeshQuality, "boundary edge far from the wetted contour");
        }
        mesh.boundary_edges.push_back(be);
    }

    // truncation-line node lists, sorted by y
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (std::abs(mesh.nodes[i].x + xT) < snap_b) mesh.trunc_left.push_back(static_cast<int>(i));
        if (std::abs(mesh.nodes[i].x - xT) < snap_b) mesh.trunc_right.push_back(static_cast<int>(i));
    }
    auto by_y = [&](int a, int b) {
        return mesh.nodes[static_cast<std::size_t>(a)].y < mesh.nodes[static_cast<std::size_t>(b)].y;
    };
    std::sort(mesh.trunc_left.begin(), mesh.trunc_left.end(), by_y);
    std::sort(mesh.trunc_right.begin(), mesh.trunc_right.end(), by_y);

    const double amin = mesh.min_angle_deg();
    if (amin < config.min_angle_deg)
        throw Error(ErrorCode::MeshQuality,
                    "minimum triangle angle " + std::to_string(amin) + " deg");
    return mesh;
}

std::string write_mesh_text(const Mesh& mesh) {
    std::ostringstream os;
    os.precision(17);
    os << "NODES " << mesh.nodes.size() << "\n";
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        os << i << " " << mesh.nodes[i].x << " " << mesh.nodes[i].y << "\n";
    os << "TRIS " << mesh.triangles.size() << "\n";
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i)
        os << i << " " << mesh.triangles[i][0] << " " << mesh.triangles[i][1] << " "
           << mesh.triangles[i][2] << "\n";
    os << "BEDGES " << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges)
        os << e.a << " " << e.b << " " << to_string(e.tag) << "\n";
    return os.str();
}

Mesh read_mesh_text(const std::string& text) {
    std::istringstream is(text);
    std::string kw;
    std::size_t n = 0;
    Mesh mesh;
    if (!(is >> kw >> n) || kw != "NODES")
        throw Error(ErrorCode::IoError, "expected NODES header");
    mesh.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t id;
        if (!(is >> id >> mesh.nodes[i].x >> mesh.nodes[i].y) || id != i)
            throw Error(ErrorCode::IoError, "bad node line");
    }
    if (!(is >> kw >> n) || kw != "TRIS") throw Error(ErrorCode::IoError, "expected TRIS");
    mesh.triangles.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t id;
        auto& t = mesh.triangles[i];
        if (!(is >> id >> t[0] >> t[1] >> t[2]) || id != i)
            throw Error(ErrorCode::IoError, "bad triangle line");
    }
    if (!(is >> kw >> n) || kw != "BEDGES") throw Error(ErrorCode::IoError, "expected BEDGES");
    mesh.boundary_edges.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& e = mesh.boundary_edges[i];
        std::string tag;
        if (!(is >> e.a >> e.b >> tag)) throw Error(ErrorCode::IoError, "bad boundary edge line");
        if (tag == "FREE_SURFACE") e.tag = BoundaryTag::FREE_SURFACE;
        else if (tag == "WETTED") e.tag = BoundaryTag::WETTED;
        else if (tag == "BOTTOM") e.tag = BoundaryTag::BOTTOM;
        else if (tag == "TRUNC_LEFT") e.tag = BoundaryTag::TRUNC_LEFT;
        else if (tag == "TRUNC_RIGHT") e.tag = BoundaryTag::TRUNC_RIGHT;
        else throw Error(ErrorCode::IoError, "unknown boundary tag " + tag);
    }
    // depth and truncation recovered from node extremes
    double ymin = 0.0, xmax = 0.0;
    for (const Point& q : mesh.nodes) {
        ymin = std::min(ymin, q.y);
        xmax = std::max(xmax, std::abs(q.x));
    }
    mesh.depth = -ymin;
    mesh.x_trunc = xmax;
    return mesh;
}

} // namespace floatwave
