#include "trispec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace trispec {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

double signed_area(const std::vector<Point2>& pts)
{
    double twice = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        twice += cross(pts[i], pts[(i + 1) % pts.size()]);
    return 0.5 * twice;
}

namespace {

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Proper or touching intersection of closed segments [a,b] and [c,d].
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d)
{
    auto orient = [](Point2 p, Point2 q, Point2 r) {
        double v = cross(q - p, r - p);
        double scale = std::max({std::abs(q.x - p.x), std::abs(q.y - p.y), std::abs(r.x - p.x),
                                 std::abs(r.y - p.y), 1e-300});
        if (std::abs(v) <= 1e-14 * scale * scale) return 0;
        return v > 0 ? 1 : -1;
    };
    auto on_segment = [](Point2 p, Point2 q, Point2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
               r.y <= std::max(p.y, q.y);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

// Drops vertices where the boundary continues straight on.
std::vector<Point2> drop_collinear(std::vector<Point2> pts)
{
    bool changed = true;
    while (changed && pts.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Point2 prev = pts[(i + pts.size() - 1) % pts.size()];
            Point2 next = pts[(i + 1) % pts.size()];
            Point2 e1 = pts[i] - prev;
            Point2 e2 = next - pts[i];
            double scale = std::hypot(e1.x, e1.y) * std::hypot(e2.x, e2.y);
            if (std::abs(cross(e1, e2)) <= 1e-12 * scale && e1.x * e2.x + e1.y * e2.y > 0) {
                pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return pts;
}

}  // namespace

Triangle::Triangle(std::array<Point2, 3> vertices) : vertices_(vertices)
{
    for (const auto& p : vertices_)
        if (!finite(p)) throw std::invalid_argument("triangle vertex is not finite");
    for (std::size_t i = 0; i < 3; ++i)
        sides_[i] = distance(vertices_[i], vertices_[(i + 1) % 3]);
    double longest = *std::max_element(sides_.begin(), sides_.end());
    double sum = sides_[0] + sides_[1] + sides_[2];
    if (!(longest > 0.0) || !(sum - longest > longest * (1.0 + 1e-14)) ||
        std::abs(signed_area({vertices_.begin(), vertices_.end()})) <= 1e-14 * longest * longest)
        throw std::invalid_argument("degenerate triangle");
}

double Triangle::area() const { return std::abs(signed_area({vertices_.begin(), vertices_.end()})); }

double Triangle::angle(std::size_t i) const
{
    Point2 p = vertices_.at(i);
    Point2 a = vertices_[(i + 1) % 3] - p;
    Point2 b = vertices_[(i + 2) % 3] - p;
    return std::atan2(std::abs(cross(a, b)), a.x * b.x + a.y * b.y);
}

double Triangle::smallest_angle() const { return std::min({angle(0), angle(1), angle(2)}); }

int Triangle::right_angle_vertex(double tol) const
{
    for (std::size_t i = 0; i < 3; ++i)
        if (std::abs(angle(i) - std::numbers::pi / 2) <= tol) return static_cast<int>(i);
    return -1;
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices))
{
    const std::size_t n = vertices_.size();
    if (n < 3) throw std::invalid_argument("polygon needs at least three vertices");
    for (const auto& p : vertices_)
        if (!finite(p)) throw std::invalid_argument("polygon vertex is not finite");
    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double len = distance(vertices_[i], vertices_[(i + 1) % n]);
        if (!(len > 0.0)) throw std::invalid_argument("polygon has a repeated vertex");
        diam = std::max(diam, len);
    }
    double a = signed_area(vertices_);
    if (a <= 1e-14 * diam * diam) throw std::invalid_argument("polygon must be counterclockwise with positive area");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n]))
                throw std::invalid_argument("polygon is self-intersecting");
        }
    }
}

Polygon Polygon::from(const Triangle& t)
{
    std::vector<Point2> pts(t.vertices().begin(), t.vertices().end());
    if (signed_area(pts) < 0) throw std::invalid_argument("triangle is clockwise");
    return Polygon(std::move(pts));
}

std::pair<Point2, Point2> Polygon::side(std::size_t i) const
{
    return {vertices_.at(i), vertices_[(i + 1) % vertices_.size()]};
}

double Polygon::side_length(std::size_t i) const
{
    auto [a, b] = side(i);
    return distance(a, b);
}

double Polygon::area() const { return signed_area(vertices_); }

bool Polygon::is_convex() const
{
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point2 e1 = vertices_[(i + 1) % n] - vertices_[i];
        Point2 e2 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
        double scale = std::hypot(e1.x, e1.y) * std::hypot(e2.x, e2.y);
        if (cross(e1, e2) < -1e-12 * scale) return false;
    }
    return true;
}

BoundarySpec::BoundarySpec(std::vector<Condition> conditions) : conditions_(std::move(conditions)) {}

BoundarySpec BoundarySpec::all_neumann(std::size_t sides)
{
    return BoundarySpec(std::vector<Condition>(sides, Condition::Neumann));
}

BoundarySpec BoundarySpec::all_dirichlet(std::size_t sides)
{
    return BoundarySpec(std::vector<Condition>(sides, Condition::Dirichlet));
}

BoundarySpec BoundarySpec::dirichlet_on(std::size_t sides, const std::vector<std::size_t>& which)
{
    std::vector<Condition> c(sides, Condition::Neumann);
    for (auto i : which) c.at(i) = Condition::Dirichlet;
    return BoundarySpec(std::move(c));
}

bool BoundarySpec::any_dirichlet() const
{
    return std::any_of(conditions_.begin(), conditions_.end(),
                       [](Condition c) { return c == Condition::Dirichlet; });
}

std::string to_string(SideLabel label)
{
    switch (label) {
    case SideLabel::S: return "S";
    case SideLabel::M: return "M";
    case SideLabel::L: return "L";
    }
    return "?";
}

bool SideClassification::tied(SideLabel a, SideLabel b) const
{
    auto i = side(a), j = side(b);
    if (i > j) std::swap(i, j);
    return std::find(ties.begin(), ties.end(), std::pair{i, j}) != ties.end();
}

Triangle right_triangle(double b)
{
    if (!(b > 0.0) || b > 1.0)
        throw std::invalid_argument("right_triangle expects 0 < b <= 1; swap legs to normalise");
    return Triangle({Point2{0, 0}, Point2{1, 0}, Point2{0, b}});
}

double b_from_alpha(double alpha) { return std::tan(alpha); }
double alpha_from_b(double b) { return std::atan(b); }
double h_from_alpha(double alpha) { return std::sin(alpha); }
double alpha_from_h(double h) { return std::asin(h); }

SideClassification classify_sides(const Triangle& t, double tie_tol)
{
    if (tie_tol < 0) throw std::invalid_argument("tie tolerance must be non-negative");
    const auto& len = t.side_lengths();
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return len[a] < len[b]; });

    SideClassification c;
    constexpr std::array labels{SideLabel::S, SideLabel::M, SideLabel::L};
    for (std::size_t r = 0; r < 3; ++r) {
        c.labels[order[r]] = labels[r];
        c.side_of[r] = order[r];
    }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (std::abs(len[i] - len[j]) / std::max(len[i], len[j]) < tie_tol) c.ties.emplace_back(i, j);
    return c;
}

Point2 reflect(Point2 p, const Line& axis)
{
    double n2 = axis.direction.x * axis.direction.x + axis.direction.y * axis.direction.y;
    Point2 d = p - axis.point;
    double t = (d.x * axis.direction.x + d.y * axis.direction.y) / n2;
    Point2 foot = axis.point + t * axis.direction;
    return 2.0 * foot - p;
}

Polygon reflect_double(const Triangle& t, std::size_t side_index)
{
    if (side_index > 2) throw std::invalid_argument("side index out of range");
    const auto& v = t.vertices();
    Point2 a = v[side_index], b = v[(side_index + 1) % 3], opposite = v[(side_index + 2) % 3];
    Point2 mirrored = reflect(opposite, Line{a, b - a});
    std::vector<Point2> quad{a, mirrored, b, opposite};
    if (signed_area(quad) < 0) std::reverse(quad.begin(), quad.end());
    auto pts = drop_collinear(std::move(quad));
    double area = std::abs(signed_area(pts));
    if (!(std::abs(area - 2.0 * t.area()) <= 1e-10 * t.area()) || area <= 0)
        throw std::invalid_argument("reflection produced a degenerate polygon");
    return Polygon(std::move(pts));
}

Rhombus rhombus_from_right_triangle(const Triangle& t)
{
    int r = t.right_angle_vertex(1e-9);
    if (r < 0) throw std::invalid_argument("rhombus construction needs a right triangle");
    const auto& len = t.side_lengths();
    // legs are the two sides meeting at the right-angle vertex
    double leg1 = len[static_cast<std::size_t>(r)];
    double leg2 = len[static_cast<std::size_t>((r + 2) % 3)];
    double a = std::max(leg1, leg2), c = std::min(leg1, leg2);
    Rhombus out{Polygon({Point2{a, 0}, Point2{0, c}, Point2{-a, 0}, Point2{0, -c}}),
                Line{{0, 0}, {1, 0}},
                Line{{0, 0}, {0, 1}},
                a,
                c,
                2.0 * std::atan(c / a)};
    return out;
}

Polygon trapezium_fixture() { return Polygon({Point2{-3, 0}, Point2{3, 0}, Point2{3, 2}, Point2{0, 2}}); }

Polygon regular_polygon(std::size_t n)
{
    if (n < 3) throw std::invalid_argument("regular polygon needs n >= 3");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        double th = std::numbers::pi / 2 + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({std::cos(th), std::sin(th)});
    }
    return Polygon(std::move(pts));
}

Triangle triangle_from_apex(double x, double y)
{
    if (!(y > 0)) throw std::invalid_argument("apex must lie above the base");
    return Triangle({Point2{0, 0}, Point2{1, 0}, Point2{x, y}});
}

namespace {
Triangle quarter_triangle(double h)
{
    if (!(h > 0.0) || !(h < 1.0)) throw std::invalid_argument("h must lie in (0, 1)");
    return Triangle({Point2{0, 0}, Point2{std::sqrt(1.0 - h * h), 0}, Point2{0, h}});
}
}  // namespace

Polygon obtuse_isosceles(double h) { return reflect_double(quarter_triangle(h), 2); }

Polygon acute_isosceles(double h) { return reflect_double(quarter_triangle(h), 0); }

}  // namespace trispec
