#include "trispec/geometry.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace trispec;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

Triangle scaled(const Triangle& t, double c)
{
    auto v = t.vertices();
    for (auto& p : v) p = c * p;
    return Triangle(v);
}

}  // namespace

TEST_CASE("right_triangle places legs on the axes")
{
    const Triangle t = right_triangle(0.8);
    CHECK(t.vertices()[0] == Point2{0, 0});
    CHECK(t.vertices()[1] == Point2{1, 0});
    CHECK(t.vertices()[2] == Point2{0, 0.8});
    CHECK(t.side_lengths()[0] == Approx(1.0));
    CHECK(t.side_lengths()[1] == Approx(std::sqrt(1.64)));
    CHECK(t.side_lengths()[2] == Approx(0.8));
    CHECK(t.smallest_angle() == Approx(std::atan(0.8)));
    CHECK(t.right_angle_vertex() == 0);

    const Triangle half = right_triangle(1 / std::sqrt(3.0));
    CHECK(half.side_lengths()[1] == Approx(2 / std::sqrt(3.0)));
    CHECK(half.side_lengths()[1] == Approx(2 * half.side_lengths()[2]));
    CHECK(half.smallest_angle() == Approx(pi / 6));

    CHECK(right_triangle(1.0).smallest_angle() == Approx(pi / 4));

    CHECK_THROWS_AS(right_triangle(0.0), std::invalid_argument);
    CHECK_THROWS_AS(right_triangle(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(right_triangle(1.5), std::invalid_argument);
}

TEST_CASE("triangle validation")
{
    CHECK_THROWS(Triangle({Point2{0, 0}, Point2{1, 0}, Point2{2, 0}}));
    CHECK_THROWS(Triangle({Point2{0, 0}, Point2{1, 0}, Point2{NAN, 1}}));
    const Triangle t({Point2{0, 0}, Point2{1, 0}, Point2{0.3, 0.7}});
    CHECK(t.angle(0) + t.angle(1) + t.angle(2) == Approx(pi));
    CHECK(t.right_angle_vertex() == -1);
}

TEST_CASE("parameter conversions")
{
    for (double a : {0.1, 0.45, pi / 6, 0.7, pi / 4}) {
        CHECK(alpha_from_b(b_from_alpha(a)) == Approx(a));
        CHECK(alpha_from_h(h_from_alpha(a)) == Approx(a));
        CHECK(h_from_alpha(a) == Approx(std::sin(a)));
        CHECK(b_from_alpha(a) == Approx(std::tan(a)));
    }
}

TEST_CASE("classify_sides")
{
    SUBCASE("legs 1 and 0.8")
    {
        const auto sc = classify_sides(right_triangle(0.8));
        CHECK(sc.side(SideLabel::S) == 2);
        CHECK(sc.side(SideLabel::M) == 0);
        CHECK(sc.side(SideLabel::L) == 1);
        CHECK(sc.labels[1] == SideLabel::L);
        CHECK(sc.ties.empty());
    }
    SUBCASE("right isosceles ties S and M")
    {
        const auto sc = classify_sides(right_triangle(1.0));
        REQUIRE(sc.ties.size() == 1);
        CHECK(sc.tied(SideLabel::S, SideLabel::M));
        CHECK_FALSE(sc.tied(SideLabel::M, SideLabel::L));
        // stable tie break by side index
        CHECK(sc.side(SideLabel::S) == 0);
        CHECK(sc.side(SideLabel::M) == 2);
    }
    SUBCASE("equilateral ties every pair")
    {
        const Triangle t({Point2{0, 0}, Point2{1, 0}, Point2{0.5, std::sqrt(3.0) / 2}});
        const auto sc = classify_sides(t);
        CHECK(sc.ties.size() == 3);
    }
    SUBCASE("tolerance is relative")
    {
        const Triangle t({Point2{0, 0}, Point2{1, 0}, Point2{0.5, 0.8}});
        CHECK(classify_sides(t, 0.0).ties.empty());
        CHECK(classify_sides(t).ties.size() == 1);
    }
}

TEST_CASE("classify_sides is scale invariant")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.95), c(0.01, 100.0);
    for (int i = 0; i < 50; ++i) {
        const Triangle t = triangle_from_apex(u(rng), u(rng));
        const auto a = classify_sides(t), b = classify_sides(scaled(t, c(rng)));
        CHECK(a.labels == b.labels);
        CHECK(a.ties == b.ties);
    }
}

TEST_CASE("reflect_double")
{
    const Triangle t = right_triangle(0.8);
    SUBCASE("over the long leg gives an acute isosceles triangle")
    {
        const Polygon p = reflect_double(t, 0);
        REQUIRE(p.side_count() == 3);
        const Triangle iso({p.vertices()[0], p.vertices()[1], p.vertices()[2]});
        double apex = 0;
        for (std::size_t i = 0; i < 3; ++i)
            if (distance(iso.vertices()[i], Point2{1, 0}) < 1e-12) apex = iso.angle(i);
        CHECK(apex == Approx(2 * std::atan(0.8)));
        CHECK(apex < pi / 2);
    }
    SUBCASE("over the short leg gives an obtuse isosceles triangle")
    {
        const Polygon p = reflect_double(t, 2);
        REQUIRE(p.side_count() == 3);
        const Triangle iso({p.vertices()[0], p.vertices()[1], p.vertices()[2]});
        CHECK(std::max({iso.angle(0), iso.angle(1), iso.angle(2)}) > pi / 2);
    }
    SUBCASE("over the hypotenuse gives a kite")
    {
        const Polygon p = reflect_double(t, 1);
        CHECK(p.side_count() == 4);
        CHECK(p.is_convex());
    }
    SUBCASE("leg reflections have exactly two equal sides")
    {
        for (double b : {0.2, 0.5, 0.8, 0.99})
            for (std::size_t leg : {std::size_t{0}, std::size_t{2}}) {
                const Polygon p = reflect_double(right_triangle(b), leg);
                REQUIRE(p.side_count() == 3);
                std::vector<double> s{p.side_length(0), p.side_length(1), p.side_length(2)};
                std::sort(s.begin(), s.end());
                const int equal = (std::abs(s[0] - s[1]) < 1e-12) + (std::abs(s[1] - s[2]) < 1e-12);
                CHECK(equal == 1);
                // the equal pair is the doubled hypotenuse
                CHECK((std::abs(s[0] - s[1]) < 1e-12 ? s[0] : s[2]) == Approx(std::sqrt(1 + b * b)));
            }
    }
    SUBCASE("area doubles")
    {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.05, 0.95);
        for (int i = 0; i < 30; ++i) {
            const Triangle s = triangle_from_apex(u(rng), u(rng));
            for (std::size_t side = 0; side < 3; ++side) {
                const Polygon p = reflect_double(s, side);
                CHECK(std::abs(p.area() - 2 * s.area()) <= 1e-12 * p.area());
            }
        }
    }
}

TEST_CASE("rhombus_from_right_triangle")
{
    SUBCASE("square")
    {
        const Rhombus r = rhombus_from_right_triangle(right_triangle(1.0));
        for (std::size_t i = 0; i < 4; ++i) CHECK(r.polygon.side_length(i) == Approx(std::sqrt(2.0)));
        CHECK(r.smallest_angle == Approx(pi / 2));
        CHECK(r.long_leg == Approx(1.0));
    }
    SUBCASE("equilateral rhombus")
    {
        const Rhombus r = rhombus_from_right_triangle(right_triangle(1 / std::sqrt(3.0)));
        CHECK(r.smallest_angle == Approx(pi / 3));
    }
    SUBCASE("smallest angle doubles the triangle's")
    {
        const Rhombus r = rhombus_from_right_triangle(right_triangle(0.9));
        CHECK(r.smallest_angle == Approx(2 * std::atan(0.9)));
        CHECK(r.smallest_angle > pi / 3);
        CHECK(r.polygon.area() == Approx(4 * right_triangle(0.9).area()));
    }
    SUBCASE("vertex set invariant under both diagonal reflections")
    {
        for (double b : {0.3, 0.7, 1.0}) {
            const Rhombus r = rhombus_from_right_triangle(right_triangle(b));
            for (const Line& axis : {r.long_diagonal, r.short_diagonal})
                for (const auto& v : r.polygon.vertices()) {
                    const Point2 m = reflect(v, axis);
                    const bool found = std::any_of(r.polygon.vertices().begin(), r.polygon.vertices().end(),
                                                   [&](const Point2& w) { return distance(w, m) < 1e-12; });
                    CHECK(found);
                }
        }
    }
    SUBCASE("rejects non-right triangles")
    {
        CHECK_THROWS(rhombus_from_right_triangle(triangle_from_apex(0.3, 0.5)));
    }
}

TEST_CASE("trapezium fixture")
{
    const Polygon p = trapezium_fixture();
    REQUIRE(p.side_count() == 4);
    CHECK(p.vertices()[0] == Point2{-3, 0});
    CHECK(p.side_length(kTrapeziumSloped) == Approx(std::sqrt(13.0)));
    CHECK(p.side_length(kTrapeziumTop) == Approx(3.0));
    CHECK(p.area() == Approx(9.0));
}

TEST_CASE("polygon validation")
{
    CHECK_THROWS(Polygon({Point2{0, 0}, Point2{0, 1}, Point2{1, 0}}));               // clockwise
    CHECK_THROWS(Polygon({Point2{0, 0}, Point2{1, 1}, Point2{1, 0}, Point2{0, 1}}));  // bow tie
    CHECK_THROWS(Polygon({Point2{0, 0}, Point2{1, 0}, Point2{1, 0}, Point2{0, 1}}));  // repeated vertex
    CHECK(regular_polygon(5).is_convex());
    CHECK(regular_polygon(6).area() == Approx(3 * std::sqrt(3.0) / 2));
    CHECK_FALSE(Polygon({Point2{0, 0}, Point2{2, 0}, Point2{1, 0.2}, Point2{1, 2}}).is_convex());
}

TEST_CASE("boundary specs")
{
    const auto n = BoundarySpec::all_neumann(3);
    const auto d = BoundarySpec::all_dirichlet(3);
    CHECK(n.all_neumann());
    CHECK(d.any_dirichlet());
    const auto m = BoundarySpec::dirichlet_on(4, {1, 3});
    CHECK_FALSE(m.is_dirichlet(0));
    CHECK(m.is_dirichlet(1));
    CHECK(m.is_dirichlet(3));
    CHECK_THROWS(BoundarySpec::dirichlet_on(3, {3}));
}

TEST_CASE("isosceles pair shares the quarter triangle")
{
    for (double h : {0.3, 0.5, 0.6}) {
        const Polygon o = obtuse_isosceles(h), a = acute_isosceles(h);
        // both have two unit sides (three for the equilateral case h = 1/2)
        for (const Polygon* p : {&o, &a}) {
            int unit = 0;
            for (std::size_t i = 0; i < 3; ++i) unit += std::abs(p->side_length(i) - 1.0) < 1e-12;
            CHECK(unit >= 2);
        }
        CHECK(o.area() == Approx(a.area()));
        CHECK(o.area() == Approx(h * std::sqrt(1 - h * h)));
    }
}
