#include "floatwave/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace floatwave {

const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidBody: return "InvalidBody";
        case ErrorCode::NotSurfacePiercing: return "NotSurfacePiercing";
        case ErrorCode::DegenerateImmersedPart: return "DegenerateImmersedPart";
        case ErrorCode::ObliqueAngleTooLarge: return "ObliqueAngleTooLarge";
        case ErrorCode::CutOff: return "CutOff";
        case ErrorCode::Unstable: return "Unstable";
        case ErrorCode::MeshQuality: return "MeshQuality";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NearlySingularT: return "NearlySingularT";
        case ErrorCode::NotDeepEnough: return "NotDeepEnough";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

double WettedSegment::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

double polygon_signed_area(const Polygon& p) {
    double a2 = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& u = p[i];
        const Point& v = p[(i + 1) % n];
        a2 += u.x * v.y - v.x * u.y;
    }
    return 0.5 * a2;
}

double polygon_area(const Polygon& p) { return std::abs(polygon_signed_area(p)); }

double polygon_diameter(const Polygon& p) {
    double xmin = p[0].x, xmax = p[0].x, ymin = p[0].y, ymax = p[0].y;
    for (const Point& q : p) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_properly_intersect(const Point& a, const Point& b, const Point& c,
                                 const Point& d) {
    const double d1 = cross(a, b, c);
    const double d2 = cross(a, b, d);
    const double d3 = cross(c, d, a);
    const double d4 = cross(c, d, b);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// integral over the triangle (a,b,c) of x^px y^py, exact for px+py <= 2
double tri_moment(const Point& a, const Point& b, const Point& c, int px, int py) {
    const double det = cross(a, b, c); // 2*signed area
    // degree-2 exact quadrature on the triangle (midpoint rule)
    const Point m[3] = {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                        {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                        {0.5 * (c.x + a.x), 0.5 * (c.y + a.y)}};
    double s = 0.0;
    for (const Point& q : m) {
        double f = 1.0;
        for (int i = 0; i < px; ++i) f *= q.x;
        for (int i = 0; i < py; ++i) f *= q.y;
        s += f;
    }
    return det / 6.0 * s;
}

} // namespace

double polygon_moment(const Polygon& p, int px, int py) {
    // fan triangulation from the first vertex; signed contributions make this
    // exact for any simple polygon
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
        s += tri_moment(p[0], p[i], p[i + 1], px, py);
    return polygon_signed_area(p) < 0 ? -s : s;
}

Point polygon_centroid(const Polygon& p) {
    const double a = polygon_moment(p, 0, 0);
    return {polygon_moment(p, 1, 0) / a, polygon_moment(p, 0, 1) / a};
}

bool polygon_is_simple(const Polygon& p, double tol) {
    const std::size_t n = p.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = p[i];
        const Point& b = p[(i + 1) % n];
        if (std::hypot(b.x - a.x, b.y - a.y) < tol) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(a, b, p[j], p[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool point_in_polygon(const Polygon& p, const Point& q) {
    bool inside = false;
    const std::size_t n = p.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((p[i].y > q.y) != (p[j].y > q.y)) {
            const double xint =
                p[j].x + (q.y - p[j].y) / (p[i].y - p[j].y) * (p[i].x - p[j].x);
            if (q.x < xint) inside = !inside;
        }
    }
    return inside;
}

namespace {

// ear-clipping triangulation of a simple polygon (CCW)
std::vector<std::array<Point, 3>> triangulate(Polygon poly) {
    if (polygon_signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
    std::vector<std::array<Point, 3>> tris;
    std::vector<std::size_t> idx(poly.size());
    std::iota(idx.begin(), idx.end(), 0);
    int guard = 0;
    while (idx.size() > 3 && guard < 10000) {
        ++guard;
        bool clipped = false;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const std::size_t ip = idx[(i + idx.size() - 1) % idx.size()];
            const std::size_t ic = idx[i];
            const std::size_t in = idx[(i + 1) % idx.size()];
            const Point &a = poly[ip], &b = poly[ic], &c = poly[in];
            if (cross(a, b, c) <= 0) continue; // reflex
            bool ear = true;
            for (std::size_t k : idx) {
                if (k == ip || k == ic || k == in) continue;
                const Point& q = poly[k];
                if (cross(a, b, q) >= 0 && cross(b, c, q) >= 0 && cross(c, a, q) >= 0) {
                    ear = false;
                    break;
                }
            }
            if (!ear) continue;
            tris.push_back({a, b, c});
            idx.erase(idx.begin() + static_cast<long>(i));
            clipped = true;
            break;
        }
        if (!clipped) break; // degenerate input; fall through with what we have
    }
    if (idx.size() == 3) tris.push_back({poly[idx[0]], poly[idx[1]], poly[idx[2]]});
    return tris;
}

// Sutherland-Hodgman clip of a convex subject against a convex clip triangle
std::vector<Point> clip_convex(std::vector<Point> subject, const std::array<Point, 3>& clip) {
    for (int e = 0; e < 3 && !subject.empty(); ++e) {
        const Point& ca = clip[static_cast<std::size_t>(e)];
        const Point& cb = clip[static_cast<std::size_t>((e + 1) % 3)];
        std::vector<Point> out;
        const std::size_t n = subject.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& s = subject[i];
            const Point& t = subject[(i + 1) % n];
            const double ds = cross(ca, cb, s);
            const double dt = cross(ca, cb, t);
            if (ds >= 0) out.push_back(s);
            if ((ds > 0 && dt < 0) || (ds < 0 && dt > 0)) {
                const double u = ds / (ds - dt);
                out.push_back({s.x + u * (t.x - s.x), s.y + u * (t.y - s.y)});
            }
        }
        subject = std::move(out);
    }
    return subject;
}

} // namespace

double polygon_overlap_area(const Polygon& a, const Polygon& b, double /*tol*/) {
    const auto ta = triangulate(a);
    const auto tb = triangulate(b);
    double area = 0.0;
    for (const auto& x : ta) {
        for (const auto& y : tb) {
            std::array<Point, 3> yy = y;
            if (cross(yy[0], yy[1], yy[2]) < 0) std::swap(yy[1], yy[2]);
            std::vector<Point> sub = {x[0], x[1], x[2]};
            if (cross(x[0], x[1], x[2]) < 0) std::swap(sub[1], sub[2]);
            const auto inter = clip_convex(sub, yy);
            if (inter.size() >= 3) area += polygon_area(inter);
        }
    }
    return area;
}

void validate_body(const BodySection& body) {
    if (body.outer_contour.size() < 3)
        throw Error(ErrorCode::InvalidBody, "contour needs at least 3 vertices");
    const double diam = polygon_diameter(body.outer_contour);
    const double tol = 1e-9 * diam;
    if (!polygon_is_simple(body.outer_contour, tol))
        throw Error(ErrorCode::InvalidBody, "contour is not a simple polygon");
    if (polygon_signed_area(body.outer_contour) <= 0)
        throw Error(ErrorCode::InvalidBody, "contour must be counterclockwise with positive area");
    if (body.water_density <= 0)
        throw Error(ErrorCode::InvalidBody, "water density must be positive");
    const double outer_area = polygon_area(body.outer_contour);
    for (std::size_t i = 0; i < body.density_regions.size(); ++i) {
        const auto& r = body.density_regions[i];
        if (r.rho < 0) throw Error(ErrorCode::InvalidBody, "negative density region");
        if (r.polygon.size() < 3 || !polygon_is_simple(r.polygon, tol))
            throw Error(ErrorCode::InvalidBody, "density region is not a simple polygon");
        const double ra = polygon_area(r.polygon);
        const double inside = polygon_overlap_area(r.polygon, body.outer_contour, tol);
        if (std::abs(inside - ra) > 1e-6 * outer_area + 1e-12)
            throw Error(ErrorCode::InvalidBody, "density region leaves the outer contour");
        for (std::size_t j = i + 1; j < body.density_regions.size(); ++j) {
            const double ov =
                polygon_overlap_area(r.polygon, body.density_regions[j].polygon, tol);
            if (ov > 1e-6 * outer_area + 1e-12)
                throw Error(ErrorCode::InvalidBody, "density regions overlap");
        }
    }
    double ymax = body.outer_contour[0].y;
    for (const Point& q : body.outer_contour) ymax = std::max(ymax, q.y);
    if (ymax <= tol)
        throw Error(ErrorCode::NotSurfacePiercing, "no part of the body lies above y=0");
}

void Decomposition::generalized_normal(const WettedSegment& s, const Point& p,
                                       double N[3]) const {
    N[0] = s.nx;
    N[1] = s.ny;
    N[2] = (p.x - centroid_of_mass.x) * s.ny - (p.y - centroid_of_mass.y) * s.nx;
}

Decomposition split_at_waterline(const BodySection& body) {
    validate_body(body);
    const double diam = polygon_diameter(body.outer_contour);
    const double tol = 1e-9 * diam;

    // snap near-waterline vertices exactly onto y = 0
    Polygon poly = body.outer_contour;
    for (Point& q : poly)
        if (std::abs(q.y) < tol) q.y = 0.0;

    double ymin = poly[0].y;
    for (const Point& q : poly) ymin = std::min(ymin, q.y);
    if (ymin >= 0.0)
        throw Error(ErrorCode::NotSurfacePiercing, "body entirely above the waterline");

    // rotate vertex list to start at a non-submerged vertex so that below-water
    // chains never wrap around the list end
    const std::size_t n = poly.size();
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (poly[i].y >= 0.0) {
            start = i;
            break;
        }
    if (start == n)
        throw Error(ErrorCode::NotSurfacePiercing, "body entirely submerged");
    std::rotate(poly.begin(), poly.begin() + static_cast<long>(start), poly.end());

    // walk the CCW contour collecting maximal chains with interior below y=0
    std::vector<std::vector<Point>> chains;
    std::vector<Point> current;
    auto flush = [&]() {
        if (current.size() >= 2) chains.push_back(current);
        current.clear();
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        if (a.y >= 0.0 && b.y >= 0.0) {
            flush();
            continue;
        }
        if (a.y >= 0.0 && b.y < 0.0) { // entering the water
            flush();
            const Point c = a.y == 0.0
                                ? a
                                : Point{a.x + (0.0 - a.y) / (b.y - a.y) * (b.x - a.x), 0.0};
            current.push_back(c);
            current.push_back(b);
        } else if (a.y < 0.0 && b.y >= 0.0) { // leaving the water
            const Point c = b.y == 0.0
                                ? b
                                : Point{a.x + (0.0 - a.y) / (b.y - a.y) * (b.x - a.x), 0.0};
            if (current.empty()) current.push_back(a);
            current.push_back(c);
            flush();
        } else { // fully below
            if (current.empty()) current.push_back(a);
            current.push_back(b);
        }
    }
    flush();
    if (chains.empty())
        throw Error(ErrorCode::NotSurfacePiercing, "body does not pierce the waterline");

    Decomposition dec;
    dec.body_diameter = diam;
    dec.tol_geom = tol;

    for (auto& ch : chains) {
        // interior points touching y=0 would pinch the immersed part
        for (std::size_t i = 1; i + 1 < ch.size(); ++i)
            if (ch[i].y == 0.0)
                throw Error(ErrorCode::DegenerateImmersedPart,
                            "immersed part touches the waterline at an interior point");
        ImmersedPart part;
        part.polygon = ch; // closing lid edge ch.back() -> ch.front() is implicit
        const double area = polygon_area(part.polygon);
        if (area < tol * diam)
            throw Error(ErrorCode::DegenerateImmersedPart, "clipped part has negligible area");
        const double x0 = ch.front().x;
        const double x1 = ch.back().x;
        part.waterplane = {std::min(x0, x1), std::max(x0, x1)};
        if (part.waterplane.length() < tol)
            throw Error(ErrorCode::DegenerateImmersedPart,
                        "immersed part touches the surface at a single point");
        for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
            WettedSegment s;
            s.a = ch[i];
            s.b = ch[i + 1];
            const double len = s.length();
            // contour is CCW, so the body-outward normal of edge a->b is
            // (dy,-dx)/len; the normal exterior to the water is its negative
            s.nx = -(s.b.y - s.a.y) / len;
            s.ny = (s.b.x - s.a.x) / len;
            part.wetted.push_back(s);
            dec.max_draft = std::max(dec.max_draft, std::max(-s.a.y, -s.b.y));
        }
        dec.parts.push_back(std::move(part));
    }

    std::sort(dec.parts.begin(), dec.parts.end(),
              [](const ImmersedPart& a, const ImmersedPart& b) {
                  return a.waterplane.lo < b.waterplane.lo;
              });
    for (std::size_t i = 0; i + 1 < dec.parts.size(); ++i)
        if (dec.parts[i].waterplane.hi > dec.parts[i + 1].waterplane.lo + tol)
            throw Error(ErrorCode::InvalidBody, "overlapping waterplane intervals");

    dec.free_surface_left_start = dec.parts.front().waterplane.lo;
    dec.free_surface_right_start = dec.parts.back().waterplane.hi;
    for (std::size_t i = 0; i + 1 < dec.parts.size(); ++i)
        dec.free_surface_inner.push_back(
            {dec.parts[i].waterplane.hi, dec.parts[i + 1].waterplane.lo});

    // mass centroid from the density regions
    double m = 0.0, mx = 0.0, my = 0.0;
    for (const auto& r : body.density_regions) {
        m += r.rho * polygon_moment(r.polygon, 0, 0);
        mx += r.rho * polygon_moment(r.polygon, 1, 0);
        my += r.rho * polygon_moment(r.polygon, 0, 1);
    }
    if (m < tol * diam)
        throw Error(ErrorCode::InvalidBody, "body has (numerically) zero mass");
    dec.centroid_of_mass = {mx / m, my / m};
    return dec;
}

JohnReport check_john_condition(const Decomposition& dec) {
    JohnReport rep;
    rep.all = true;
    for (const auto& part : dec.parts) {
        double xmin = part.polygon[0].x, xmax = part.polygon[0].x;
        for (const Point& q : part.polygon) {
            xmin = std::min(xmin, q.x);
            xmax = std::max(xmax, q.x);
        }
        const bool ok = xmin >= part.waterplane.lo - dec.tol_geom &&
                        xmax <= part.waterplane.hi + dec.tol_geom;
        rep.per_part.push_back(ok);
        rep.all = rep.all && ok;
    }
    return rep;
}

namespace {

bool polygons_equal_up_to_cycle(const Polygon& a, Polygon b, double tol) {
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    for (int rev = 0; rev < 2; ++rev) {
        for (std::size_t shift = 0; shift < n; ++shift) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                const Point& u = a[i];
                const Point& v = b[(i + shift) % n];
                ok = std::abs(u.x - v.x) <= tol && std::abs(u.y - v.y) <= tol;
            }
            if (ok) return true;
        }
        std::reverse(b.begin(), b.end());
    }
    return false;
}

Polygon mirror_x(const Polygon& p) {
    Polygon m = p;
    for (Point& q : m) q.x = -q.x;
    return m;
}

} // namespace

bool check_symmetry(const BodySection& body) {
    const double tol = 1e-9 * polygon_diameter(body.outer_contour);
    if (!polygons_equal_up_to_cycle(body.outer_contour, mirror_x(body.outer_contour), tol))
        return false;
    std::vector<bool> used(body.density_regions.size(), false);
    for (const auto& r : body.density_regions) {
        const Polygon m = mirror_x(r.polygon);
        bool found = false;
        for (std::size_t j = 0; j < body.density_regions.size() && !found; ++j) {
            if (used[j]) continue;
            const auto& s = body.density_regions[j];
            if (std::abs(s.rho - r.rho) <= 1e-12 + 1e-9 * std::abs(r.rho) &&
                polygons_equal_up_to_cycle(m, s.polygon, tol)) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::optional<double> inner_half_spacing(const Decomposition& dec) {
    if (dec.parts.size() != 2) return std::nullopt;
    const double b1 = dec.parts[0].waterplane.hi;
    const double b2 = dec.parts[1].waterplane.lo;
    if (std::abs(b1 + b2) > 1e2 * dec.tol_geom) return std::nullopt; // not symmetric
    return 0.5 * (b2 - b1);
}

} // namespace floatwave
