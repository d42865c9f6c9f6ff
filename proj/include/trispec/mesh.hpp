#pragma once

#include "trispec/geometry.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace trispec {

using Cell = std::array<std::size_t, 3>;

struct BoundaryEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t side = 0;  // index of the polygon side the edge lies on

    friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// Conforming triangulation. Cells are counterclockwise; every boundary edge
/// carries the index of the polygon side it came from.
struct Mesh {
    std::vector<Point2> vertices;
    std::vector<Cell> cells;
    std::vector<BoundaryEdge> boundary_edges;
    std::size_t side_count = 0;
    int level = 0;

    double cell_area(std::size_t c) const;
    double total_area() const;
    /// Smallest signed cell area; positive for a correctly oriented mesh.
    double min_signed_area() const;
};

/// Vertex permutation induced by a reflection: permutation[v] is the vertex at
/// the mirror image of vertex v.
struct SymmetryMap {
    Line axis;
    std::vector<std::size_t> permutation;

    bool is_involution() const;
};

/// Fan triangulation from vertex 0; an obtuse triangle is instead split along
/// the altitude from its obtuse vertex. Only convex polygons are accepted.
Mesh triangulate(const Polygon& p);

/// Red refinement: every cell is split into four through its edge midpoints.
Mesh refine_uniform(const Mesh& m);

Mesh refine_to(Mesh m, int level);

struct SymmetricRhombusMesh {
    Mesh mesh;
    Rhombus rhombus;
    SymmetryMap long_diagonal;   // reflection y -> -y
    SymmetryMap short_diagonal;  // reflection x -> -x
};

/// The canonical quarter triangle (0,0), (a,0), (0,c) refined to `level` and
/// reflected into all four quadrants. Rhombus side q is the hypotenuse of the
/// quarter in quadrant q (counterclockwise from the positive x-axis).
SymmetricRhombusMesh symmetric_rhombus_mesh(const Triangle& t, int level);

/// Builds a reflection map by exact coordinate lookup. Throws if some vertex
/// has no mirror partner within `tol`.
SymmetryMap reflection_map(const Mesh& m, const Line& axis, double tol = 1e-12);

/// Composition (first applied, then second): result[v] = second[first[v]].
std::vector<std::size_t> compose(const std::vector<std::size_t>& first, const std::vector<std::size_t>& second);

/// Relabels vertices so that old vertex v becomes new vertex perm[v].
Mesh permute_vertices(const Mesh& m, const std::vector<std::size_t>& perm);

/// Vertices lying on at least one boundary edge.
std::vector<bool> boundary_vertices(const Mesh& m);

/// Vertex lines `v x y`, cell lines `c i j k`, boundary lines `b i j side`.
void write_mesh(std::ostream& out, const Mesh& m);
Mesh read_mesh(std::istream& in);

}  // namespace trispec
