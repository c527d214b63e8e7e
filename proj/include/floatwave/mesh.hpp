#pragma once

#include <array>
#include <string>
#include <vector>

#include "floatwave/geometry.hpp"

namespace floatwave {

enum class BoundaryTag { FREE_SURFACE, WETTED, BOTTOM, TRUNC_LEFT, TRUNC_RIGHT };

const char* to_string(BoundaryTag t);

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryTag tag = BoundaryTag::FREE_SURFACE;
    // for WETTED edges: owning contour segment and water-exterior normal
    int part = -1;
    int segment = -1;
    double nx = 0.0;
    double ny = 0.0;
};

struct MeshConfig {
    double h_mesh = 0.1;
    double x_trunc = 0.0;       // 0: choose a + 2h automatically
    double refine_factor = 4.0; // edge shrink near waterline contact points
    bool symmetric = false;     // mirror-exact mesh about x = 0
    double min_angle_deg = 10.0;
};

struct Mesh {
    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    double depth = 0.0;
    double x_trunc = 0.0;
    bool symmetric = false;
    std::vector<int> mirror; // node index of (-x, y), only when symmetric
    // node indices per truncation line, sorted by y (for DtN and far field)
    std::vector<int> trunc_left;
    std::vector<int> trunc_right;
    // x-lines the mesh was generated from, with their node indices sorted by
    // y (used by the free-surface column transform diagnostic)
    std::vector<double> line_x;
    std::vector<std::vector<int>> line_nodes;

    double min_angle_deg() const;
    double triangle_area(int t) const;
};

// dec == nullptr meshes the empty strip
Mesh generate_mesh(const Decomposition* dec, double depth, const MeshConfig& config);

std::string write_mesh_text(const Mesh& mesh);
Mesh read_mesh_text(const std::string& text);

} // namespace floatwave
