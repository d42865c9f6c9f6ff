#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace trispec {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

double distance(Point2 a, Point2 b);
double cross(Point2 a, Point2 b);

/// Signed area of the polygon through `pts` (positive when counterclockwise).
double signed_area(const std::vector<Point2>& pts);

/// A non-degenerate triangle. Side i runs from vertex i to vertex (i+1) % 3.
class Triangle {
public:
    explicit Triangle(std::array<Point2, 3> vertices);

    const std::array<Point2, 3>& vertices() const { return vertices_; }
    const std::array<double, 3>& side_lengths() const { return sides_; }
    double area() const;
    /// Interior angle at vertex i.
    double angle(std::size_t i) const;
    double smallest_angle() const;
    /// Index of the vertex carrying a right angle (within `tol` radians), or -1.
    int right_angle_vertex(double tol = 1e-12) const;

private:
    std::array<Point2, 3> vertices_;
    std::array<double, 3> sides_;
};

/// Simple convex-or-not polygon, stored counterclockwise. Side i runs from
/// vertex i to vertex (i+1) % n.
class Polygon {
public:
    explicit Polygon(std::vector<Point2> vertices);
    static Polygon from(const Triangle& t);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t side_count() const { return vertices_.size(); }
    std::pair<Point2, Point2> side(std::size_t i) const;
    double side_length(std::size_t i) const;
    double area() const;
    bool is_convex() const;

private:
    std::vector<Point2> vertices_;
};

enum class Condition { Neumann, Dirichlet };

/// One boundary condition per polygon side.
class BoundarySpec {
public:
    BoundarySpec() = default;
    explicit BoundarySpec(std::vector<Condition> conditions);

    static BoundarySpec all_neumann(std::size_t sides);
    static BoundarySpec all_dirichlet(std::size_t sides);
    /// Dirichlet exactly on the listed sides, Neumann elsewhere.
    static BoundarySpec dirichlet_on(std::size_t sides, const std::vector<std::size_t>& which);

    std::size_t size() const { return conditions_.size(); }
    Condition operator[](std::size_t i) const { return conditions_.at(i); }
    bool is_dirichlet(std::size_t i) const { return conditions_.at(i) == Condition::Dirichlet; }
    bool any_dirichlet() const;
    bool all_neumann() const { return !any_dirichlet(); }
    const std::vector<Condition>& conditions() const { return conditions_; }

    friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;

private:
    std::vector<Condition> conditions_;
};

enum class SideLabel { S, M, L };

std::string to_string(SideLabel label);

struct SideClassification {
    /// labels[i] is the label of triangle side i.
    std::array<SideLabel, 3> labels{};
    /// Side index carrying each label, indexed by SideLabel.
    std::array<std::size_t, 3> side_of{};
    /// Pairs of side indices (i < j) whose lengths agree within the tie tolerance.
    std::vector<std::pair<std::size_t, std::size_t>> ties;

    std::size_t side(SideLabel label) const { return side_of[static_cast<std::size_t>(label)]; }
    bool tied(SideLabel a, SideLabel b) const;
};

inline constexpr double kDefaultTieTolerance = 1e-9;

/// Right triangle (0,0), (1,0), (0,b). Sides: 0 = x-axis leg (length 1),
/// 1 = hypotenuse, 2 = y-axis leg (length b).
Triangle right_triangle(double b);

/// Conversions between the smallest angle alpha, the leg ratio b = tan(alpha)
/// and h = sin(alpha).
double b_from_alpha(double alpha);
double alpha_from_b(double b);
double h_from_alpha(double alpha);
double alpha_from_h(double h);

SideClassification classify_sides(const Triangle& t, double tie_tol = kDefaultTieTolerance);

/// Union of `t` and its mirror image across side `side_index`. Collinear
/// vertices are dropped, so a right triangle mirrored over a leg yields an
/// isosceles triangle and any other mirror yields a kite.
Polygon reflect_double(const Triangle& t, std::size_t side_index);

struct Line {
    Point2 point;
    Point2 direction;
};

Point2 reflect(Point2 p, const Line& axis);

struct Rhombus {
    Polygon polygon;
    Line long_diagonal;
    Line short_diagonal;
    double long_leg = 0.0;   // half of the long diagonal
    double short_leg = 0.0;  // half of the short diagonal
    double smallest_angle = 0.0;
};

/// Rhombus assembled from four copies of right triangle `t`, diagonals along
/// the coordinate axes: vertices (±a, 0), (0, ±c) with a ≥ c the leg lengths.
Rhombus rhombus_from_right_triangle(const Triangle& t);

/// Trapezium (-3,0), (3,0), (3,2), (0,2). Sides: bottom, right, top, sloped.
Polygon trapezium_fixture();
inline constexpr std::size_t kTrapeziumTop = 2;
inline constexpr std::size_t kTrapeziumSloped = 3;

/// Regular n-gon with unit circumradius, centred at the origin.
Polygon regular_polygon(std::size_t n);

/// Triangle (0,0), (1,0), (x,y).
Triangle triangle_from_apex(double x, double y);

/// Obtuse isosceles O(beta) with vertices (0,h), (±sqrt(1-h²), 0).
Polygon obtuse_isosceles(double h);
/// Acute isosceles A(alpha) with vertices (0,±h), (sqrt(1-h²), 0).
Polygon acute_isosceles(double h);

}  // namespace trispec
