#include "trispec/analysis.hpp"
#include "trispec/commands.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace trispec;
using doctest::Approx;

namespace {

std::shared_ptr<const Mesh> mesh_of(const Polygon& p, int level)
{
    return std::make_shared<const Mesh>(refine_to(triangulate(p), level));
}

double first_value(const Polygon& p, const BoundarySpec& bc, int level, int k = 1)
{
    return smallest_eigenpairs(assemble(mesh_of(p, level), bc), k).value(static_cast<std::size_t>(k - 1));
}

Triangle random_triangle(std::mt19937& rng)
{
    std::uniform_real_distribution<double> x(-0.3, 1.3), y(0.15, 1.2);
    return triangle_from_apex(x(rng), y(rng));
}

Triangle rotated_labels(const Triangle& t)
{
    const auto& v = t.vertices();
    return Triangle({v[1], v[2], v[0]});
}

}  // namespace

TEST_CASE("constraint monotonicity on random triangles")
{
    std::mt19937 rng(20261016);
    // nonempty proper subsets of the three sides; D₂ adds one more side
    std::uniform_int_distribution<int> mask(1, 6);
    for (int trial = 0; trial < 20; ++trial) {
        const Polygon p = Polygon::from(random_triangle(rng));
        const int small = mask(rng);
        std::vector<std::size_t> d1, d2;
        for (std::size_t s = 0; s < 3; ++s)
            if (small & (1 << s)) d1.push_back(s);
        d2 = d1;
        for (std::size_t s = 0; s < 3; ++s)
            if (!(small & (1 << s))) {
                d2.push_back(s);
                break;
            }
        const auto mesh = mesh_of(p, 3);
        const double l1 = smallest_eigenpairs(assemble(mesh, BoundarySpec::dirichlet_on(3, d1)), 1).value(0);
        const double l2 = smallest_eigenpairs(assemble(mesh, BoundarySpec::dirichlet_on(3, d2)), 1).value(0);
        CAPTURE(trial);
        CHECK(l1 <= l2 * (1 + 1e-10));
    }
}

TEST_CASE("spectra do not depend on vertex labels")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        const Triangle t = random_triangle(rng);
        const Triangle r = rotated_labels(t);
        // side i of t is side (i + 2) % 3 of r
        const double a = first_value(Polygon::from(t), BoundarySpec::dirichlet_on(3, {0}), 3);
        const double b = first_value(Polygon::from(r), BoundarySpec::dirichlet_on(3, {2}), 3);
        CHECK(a == Approx(b).epsilon(1e-10));
        const double na = first_value(Polygon::from(t), BoundarySpec::all_neumann(3), 3, 2);
        const double nb = first_value(Polygon::from(r), BoundarySpec::all_neumann(3), 3, 2);
        CHECK(na == Approx(nb).epsilon(1e-10));
    }
}

TEST_CASE("spectra are invariant under mesh relabelling")
{
    const auto m = mesh_of(trapezium_fixture(), 2);
    std::vector<std::size_t> perm(m->vertices.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937 rng(3);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto p = std::make_shared<const Mesh>(permute_vertices(*m, perm));
    const BoundarySpec bc = BoundarySpec::dirichlet_on(4, {kTrapeziumTop});
    const auto a = smallest_eigenpairs(assemble(m, bc), 4);
    const auto b = smallest_eigenpairs(assemble(p, bc), 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a.value(i) == Approx(b.value(i)).epsilon(1e-10));
}

TEST_CASE("translation and scaling")
{
    const Triangle t = triangle_from_apex(0.3, 0.7);
    auto moved = t.vertices();
    auto scaled = t.vertices();
    for (auto& v : moved) v = v + Point2{2.5, -1.0};
    for (auto& v : scaled) v = 2.0 * v;
    const BoundarySpec bc = BoundarySpec::dirichlet_on(3, {1, 2});
    const double base = first_value(Polygon::from(t), bc, 3);
    CHECK(first_value(Polygon::from(Triangle(moved)), bc, 3) == Approx(base).epsilon(1e-10));
    CHECK(first_value(Polygon::from(Triangle(scaled)), bc, 3) == Approx(base / 4).epsilon(1e-10));
}

TEST_CASE("rhombus matrices commute with both reflections")
{
    for (double b : {0.5, 1.0}) {
        const auto rm = symmetric_rhombus_mesh(right_triangle(b), 2);
        const auto mesh = std::make_shared<const Mesh>(rm.mesh);
        const auto sys = assemble(mesh, BoundarySpec::all_neumann(4));
        const Eigen::MatrixXd k(sys.stiffness), m(sys.mass);
        for (const auto* map : {&rm.long_diagonal, &rm.short_diagonal}) {
            const auto n = static_cast<Eigen::Index>(map->permutation.size());
            Eigen::MatrixXd pk(n, n), pm(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    const auto pi = static_cast<Eigen::Index>(map->permutation[static_cast<std::size_t>(i)]);
                    const auto pj = static_cast<Eigen::Index>(map->permutation[static_cast<std::size_t>(j)]);
                    pk(i, j) = k(pi, pj);
                    pm(i, j) = m(pi, pj);
                }
            CHECK((pk - k).norm() <= 1e-12 * k.norm());
            CHECK((pm - m).norm() <= 1e-12 * m.norm());
        }
    }
}

TEST_CASE("Galerkin monotonicity across nested meshes")
{
    const std::vector<std::pair<Polygon, BoundarySpec>> problems{
        {Polygon::from(right_triangle(0.6)), BoundarySpec::all_neumann(3)},
        {Polygon::from(right_triangle(0.6)), BoundarySpec::dirichlet_on(3, {0, 2})},
        {Polygon::from(triangle_from_apex(0.2, 0.5)), BoundarySpec::dirichlet_on(3, {1})},
        {trapezium_fixture(), BoundarySpec::dirichlet_on(4, {kTrapeziumSloped})},
        {regular_polygon(5), BoundarySpec::dirichlet_on(5, {0, 1})},
    };
    for (const auto& [p, bc] : problems) {
        const auto seq = solve_sequence(p, bc, {2, 3}, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            std::vector<double> v;
            for (const auto& s : seq) v.push_back(s.value(i));
            CHECK(nonincreasing(v));
        }
    }
}

TEST_CASE("Rayleigh quotients bound the first eigenvalue from above")
{
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    const auto m = mesh_of(Polygon::from(right_triangle(0.7)), 3);
    const auto sys = assemble(m, BoundarySpec::dirichlet_on(3, {1}));
    const double l1 = smallest_eigenpairs(sys, 1).value(0);
    for (int trial = 0; trial < 20; ++trial) {
        FEFunction u{m, Eigen::VectorXd(static_cast<Eigen::Index>(m->vertices.size()))};
        for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values[i] = g(rng);
        u.values = sys.extend(sys.restrict(u.values));
        CHECK(rayleigh_quotient(sys, u) >= l1 * (1 - 1e-12));
    }
}

TEST_CASE("nodal counts of first mixed modes and of mu2")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const Triangle t = random_triangle(rng);
        const auto m = mesh_of(Polygon::from(t), 4);
        const auto n = smallest_eigenpairs(assemble(m, BoundarySpec::all_neumann(3)), 2);
        CAPTURE(trial);
        CHECK(nodal_domain_count(*m, n.pairs[1].vector) == 2);
        for (std::size_t s = 0; s < 3; ++s) {
            const auto d = smallest_eigenpairs(assemble(m, BoundarySpec::dirichlet_on(3, {s})), 1);
            CHECK(nodal_domain_count(*m, d.pairs[0].vector) == 1);
        }
    }
}

TEST_CASE("reports are byte-identical on repeat")
{
    RunOptions o;
    o.levels = 3;
    o.base_level = 2;
    CHECK(to_json(cmd_trapezium(o)) == to_json(cmd_trapezium(o)));
    CHECK(to_json(cmd_rhombus(1.4, o)) == to_json(cmd_rhombus(1.4, o)));
    o.threads = 1;
    RunOptions parallel = o;
    parallel.threads = 4;
    CHECK(to_json(cmd_order(0.6, o)) == to_json(cmd_order(0.6, parallel)));
}
