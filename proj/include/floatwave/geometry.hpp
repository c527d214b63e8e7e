#pragma once

#include <optional>
#include <vector>

#include "floatwave/errors.hpp"

namespace floatwave {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Polygon = std::vector<Point>; // closed, vertices listed once, CCW

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

struct DensityRegion {
    Polygon polygon;
    double rho = 1.0; // relative density rho/rho0
};

/// Cylinder cross-section: outer contour plus piecewise-constant density
/// regions. The contour must be simple, CCW and pierce the waterline y = 0.
struct BodySection {
    Polygon outer_contour;
    std::vector<DensityRegion> density_regions;
    double water_density = 1.0; // rho0
};

struct WaterConfig {
    bool infinite_depth = true;
    double depth = 0.0; // valid when !infinite_depth; must exceed max draft
    double gravity = 9.81;
};

// one open polyline of the wetted contour, with per-segment unit normal
// pointing out of the water (into the body)
struct WettedSegment {
    Point a;
    Point b;
    double nx = 0.0;
    double ny = 0.0;
    double length() const;
};

struct ImmersedPart {
    Polygon polygon;      // chain below y=0 closed by the waterplane lid, CCW
    Interval waterplane;  // lid interval on y=0
    std::vector<WettedSegment> wetted; // ordered along the contour
};

struct Decomposition {
    std::vector<ImmersedPart> parts; // ordered by increasing waterplane.lo
    std::vector<Interval> free_surface_inner; // F0 pieces between parts
    double free_surface_left_start = 0.0;     // F_inf: (-inf, this)
    double free_surface_right_start = 0.0;    // F_inf: (this, +inf)
    Point centroid_of_mass;
    double max_draft = 0.0; // b0 = sup |y| over immersed parts
    double body_diameter = 0.0;
    double tol_geom = 0.0;  // 1e-9 * diameter

    // generalized normal N = (n1, n2, (x-x0) n2 - (y-y0) n1) at a point of a
    // wetted segment
    void generalized_normal(const WettedSegment& s, const Point& p, double N[3]) const;
};

// ---- polygon utilities ----

double polygon_signed_area(const Polygon& p);
double polygon_area(const Polygon& p);
bool polygon_is_simple(const Polygon& p, double tol);
double polygon_diameter(const Polygon& p);
// exact integral of x^px * y^py (px+py <= 2) over the polygon interior
double polygon_moment(const Polygon& p, int px, int py);
Point polygon_centroid(const Polygon& p);
// area of intersection of two convex-or-not simple polygons, by clipping
// against half-planes is not general; used only for overlap tolerance checks
double polygon_overlap_area(const Polygon& a, const Polygon& b, double tol);
bool point_in_polygon(const Polygon& p, const Point& q);

// ---- operations ----

Decomposition split_at_waterline(const BodySection& body);

struct JohnReport {
    std::vector<bool> per_part;
    bool all = false;
};
JohnReport check_john_condition(const Decomposition& dec);

bool check_symmetry(const BodySection& body);

/// half-spacing b for the symmetric two-part configuration: inner waterline
// points are at -b and +b
std::optional<double> inner_half_spacing(const Decomposition& dec);

void validate_body(const BodySection& body);

} // namespace floatwave
