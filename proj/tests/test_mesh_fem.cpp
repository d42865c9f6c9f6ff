#include "trispec/analysis.hpp"
#include "trispec/fem.hpp"
#include "trispec/mesh.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <sstream>

using namespace trispec;
using doctest::Approx;

namespace {

std::shared_ptr<const Mesh> mesh_of(const Polygon& p, int level)
{
    return std::make_shared<const Mesh>(refine_to(triangulate(p), level));
}

Eigen::MatrixXd dense(const SpMat& a) { return Eigen::MatrixXd(a); }

// Every interior edge belongs to two cells, every boundary edge to one, and the
// edges used once are exactly the tagged boundary edges.
void check_conforming(const Mesh& m)
{
    std::map<std::pair<std::size_t, std::size_t>, int> uses;
    for (const auto& c : m.cells)
        for (int i = 0; i < 3; ++i) {
            auto a = c[i], b = c[(i + 1) % 3];
            ++uses[{std::min(a, b), std::max(a, b)}];
        }
    std::size_t once = 0;
    for (const auto& [e, n] : uses) {
        CHECK(n <= 2);
        if (n == 1) ++once;
    }
    CHECK(once == m.boundary_edges.size());
    for (const auto& e : m.boundary_edges) CHECK(uses[{std::min(e.a, e.b), std::max(e.a, e.b)}] == 1);
}

}  // namespace

TEST_CASE("refinement keeps area, orientation and conformity")
{
    const Polygon shapes[] = {Polygon::from(right_triangle(0.8)), trapezium_fixture(), regular_polygon(5),
                              Polygon::from(triangle_from_apex(-0.4, 0.3))};
    for (const auto& p : shapes) {
        Mesh m = triangulate(p);
        for (int level = 0; level <= 3; ++level) {
            CHECK(m.total_area() == Approx(p.area()).epsilon(1e-13));
            CHECK(m.min_signed_area() > 0);
            check_conforming(m);
            m = refine_uniform(m);
        }
    }
}

TEST_CASE("red refinement multiplies the cell count by four")
{
    const Mesh m0 = triangulate(Polygon::from(right_triangle(0.5)));
    const Mesh m3 = refine_to(m0, 3);
    CHECK(m3.cells.size() == m0.cells.size() * 64);
    CHECK(m3.level == 3);
    CHECK(m3.boundary_edges.size() == m0.boundary_edges.size() * 8);
}

TEST_CASE("boundary edges keep their side tags")
{
    const Polygon p = trapezium_fixture();
    const Mesh m = refine_to(triangulate(p), 3);
    std::vector<double> length(p.side_count(), 0.0);
    for (const auto& e : m.boundary_edges) length[e.side] += distance(m.vertices[e.a], m.vertices[e.b]);
    for (std::size_t s = 0; s < p.side_count(); ++s) CHECK(length[s] == Approx(p.side_length(s)).epsilon(1e-13));
}

TEST_CASE("an obtuse triangle is split into two right triangles")
{
    const Triangle t = triangle_from_apex(-0.4, 0.3);
    const Mesh m = triangulate(Polygon::from(t));
    REQUIRE(m.cells.size() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& cell = m.cells[c];
        const Triangle piece({m.vertices[cell[0]], m.vertices[cell[1]], m.vertices[cell[2]]});
        CHECK(piece.right_angle_vertex(1e-10) >= 0);
    }
    CHECK(m.side_count == 3);
}

TEST_CASE("symmetric rhombus mesh maps are coordinate reflections")
{
    const auto rm = symmetric_rhombus_mesh(right_triangle(0.7), 3);
    const Mesh& m = rm.mesh;
    CHECK(rm.long_diagonal.is_involution());
    CHECK(rm.short_diagonal.is_involution());
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        const Point2 p = m.vertices[v];
        const Point2 ql = m.vertices[rm.long_diagonal.permutation[v]];
        const Point2 qs = m.vertices[rm.short_diagonal.permutation[v]];
        CHECK(ql.x == p.x);
        CHECK(ql.y == -p.y);
        CHECK(qs.x == -p.x);
        CHECK(qs.y == p.y);
    }
    CHECK(m.total_area() == Approx(rm.rhombus.polygon.area()).epsilon(1e-13));
    CHECK(m.min_signed_area() > 0);
    check_conforming(m);
}

TEST_CASE("reflection_map agrees with the built-in maps")
{
    const auto rm = symmetric_rhombus_mesh(right_triangle(0.6), 2);
    const auto l = reflection_map(rm.mesh, rm.rhombus.long_diagonal);
    const auto s = reflection_map(rm.mesh, rm.rhombus.short_diagonal);
    CHECK(l.permutation == rm.long_diagonal.permutation);
    CHECK(s.permutation == rm.short_diagonal.permutation);
    const auto both = compose(l.permutation, s.permutation);
    for (std::size_t v = 0; v < both.size(); ++v) {
        CHECK(rm.mesh.vertices[both[v]].x == -rm.mesh.vertices[v].x);
        CHECK(rm.mesh.vertices[both[v]].y == -rm.mesh.vertices[v].y);
    }
}

TEST_CASE("reflection_map rejects a non-symmetric mesh")
{
    const Mesh m = refine_to(triangulate(Polygon::from(right_triangle(0.6))), 1);
    CHECK_THROWS(reflection_map(m, Line{{0, 0}, {1, 0}}));
}

TEST_CASE("mesh text round trip")
{
    const Mesh m = refine_to(triangulate(trapezium_fixture()), 2);
    std::stringstream s;
    write_mesh(s, m);
    const Mesh r = read_mesh(s);
    CHECK(r.vertices == m.vertices);
    CHECK(r.cells == m.cells);
    CHECK(r.boundary_edges == m.boundary_edges);
    CHECK(r.side_count == m.side_count);

    std::istringstream bad("v 0 0\nc 0 1 2\n");
    CHECK_THROWS(read_mesh(bad));
    std::istringstream junk("q 1 2\n");
    CHECK_THROWS(read_mesh(junk));
}

TEST_CASE("permute_vertices relabels consistently")
{
    const Mesh m = refine_to(triangulate(Polygon::from(right_triangle(0.9))), 1);
    std::vector<std::size_t> perm(m.vertices.size());
    for (std::size_t v = 0; v < perm.size(); ++v) perm[v] = perm.size() - 1 - v;
    const Mesh p = permute_vertices(m, perm);
    for (std::size_t v = 0; v < perm.size(); ++v) CHECK(p.vertices[perm[v]] == m.vertices[v]);
    CHECK(p.total_area() == Approx(m.total_area()));
    CHECK(p.min_signed_area() > 0);
}

TEST_CASE("reference element matrices")
{
    const auto e = element_matrices({0, 0}, {1, 0}, {0, 1});
    Eigen::Matrix3d k;
    k << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
    CHECK((e.stiffness - k).norm() < 1e-15);
    CHECK(e.mass.sum() == Approx(0.5));
    CHECK(e.mass(0, 0) == Approx(1.0 / 12));
    CHECK(e.mass(0, 1) == Approx(1.0 / 24));

    // translation and rotation invariance of the stiffness
    const double c = std::cos(0.7), s = std::sin(0.7);
    auto rot = [&](Point2 p) { return Point2{c * p.x - s * p.y + 3, s * p.x + c * p.y - 1}; };
    const auto r = element_matrices(rot({0, 0}), rot({1, 0}), rot({0, 1}));
    CHECK((r.stiffness - k).norm() < 1e-13);
    CHECK((r.mass - e.mass).norm() < 1e-13);
}

TEST_CASE("Neumann stiffness annihilates constants")
{
    const auto m = mesh_of(regular_polygon(6), 3);
    const auto sys = assemble(m, BoundarySpec::all_neumann(6));
    CHECK(sys.dimension() == static_cast<Eigen::Index>(m->vertices.size()));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.dimension());
    CHECK((sys.stiffness * ones).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(ones.dot(sys.mass * ones) == Approx(m->total_area()).epsilon(1e-13));
}

TEST_CASE("Dirichlet elimination counts interior vertices")
{
    const Polygon p = Polygon::from(right_triangle(1.0));
    CHECK_THROWS(assemble(mesh_of(p, 1), BoundarySpec::all_dirichlet(3)));
    const auto sys = assemble(mesh_of(p, 2), BoundarySpec::all_dirichlet(3));
    CHECK(sys.dimension() == 3);

    // a vertex shared by Dirichlet and Neumann sides is constrained
    const auto m = mesh_of(p, 2);
    const auto mixed = assemble(m, BoundarySpec::dirichlet_on(3, {0}));
    CHECK(mixed.dof_of_vertex[0] == -1);
    CHECK(mixed.dof_of_vertex[1] == -1);
    CHECK(mixed.dof_of_vertex[2] >= 0);
    CHECK(mixed.free_dofs.size() + mixed.constrained_dofs.size() == m->vertices.size());
}

TEST_CASE("assembled matrices are symmetric and definite where expected")
{
    const auto m = mesh_of(trapezium_fixture(), 2);
    const auto n = assemble(m, BoundarySpec::all_neumann(4));
    const auto d = assemble(m, BoundarySpec::dirichlet_on(4, {kTrapeziumTop}));
    for (const auto* sys : {&n, &d}) {
        const Eigen::MatrixXd k = dense(sys->stiffness), mm = dense(sys->mass);
        CHECK((k - k.transpose()).norm() < 1e-13);
        CHECK((mm - mm.transpose()).norm() < 1e-13);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(mm);
        CHECK(em.eigenvalues().minCoeff() > 0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kn(dense(n.stiffness));
    CHECK(kn.eigenvalues().minCoeff() > -1e-12);
    CHECK(std::abs(kn.eigenvalues()(0)) < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kd(dense(d.stiffness));
    CHECK(kd.eigenvalues().minCoeff() > 1e-8);
}

TEST_CASE("restrict and extend are inverse on free dofs")
{
    const auto m = mesh_of(Polygon::from(right_triangle(0.7)), 2);
    const auto sys = assemble(m, BoundarySpec::dirichlet_on(3, {1}));
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(sys.dimension(), 1.0, 2.0);
    const Eigen::VectorXd full = sys.extend(x);
    CHECK((sys.restrict(full) - x).norm() == 0.0);
    for (auto v : sys.constrained_dofs) CHECK(full[v] == 0.0);
}

TEST_CASE("Rayleigh quotients and energy split of linear functions")
{
    const auto m = mesh_of(Polygon::from(right_triangle(0.5)), 3);
    const auto sys = assemble(m, BoundarySpec::all_neumann(3));
    const double area = 0.25;
    // u = x: ∫|∇u|² = area, ∫u² = ∫x² over the triangle (0,0),(1,0),(0,b) = b/12
    const auto ux = interpolate(m, [](Point2 p) { return p.x; });
    CHECK(rayleigh_quotient(sys, ux) == Approx(area / (0.5 / 12)).epsilon(1e-12));
    auto [ex, ey] = energy_split(*m, ux);
    CHECK(ex == Approx(area));
    CHECK(std::abs(ey) < 1e-14);
    const auto uy = interpolate(m, [](Point2 p) { return p.y; });
    std::tie(ex, ey) = energy_split(*m, uy);
    CHECK(std::abs(ex) < 1e-14);
    CHECK(ey == Approx(area));
}

TEST_CASE("mean_zero_project removes the weighted mean")
{
    const auto m = mesh_of(regular_polygon(5), 2);
    const auto sys = assemble(m, BoundarySpec::all_neumann(5));
    const auto u = interpolate(m, [](Point2 p) { return 1.0 + p.x * p.x + p.y; });
    const auto z = mean_zero_project(sys, u);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.dimension());
    CHECK(std::abs(ones.dot(sys.mass * z.values)) < 1e-13);
    const auto d = assemble(m, BoundarySpec::all_dirichlet(5));
    CHECK_THROWS(mean_zero_project(d, u));
}

TEST_CASE("interval system")
{
    const auto sys = assemble_interval(2.0, 8);
    CHECK(sys.dimension() == 9);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
    CHECK((sys.stiffness * ones).norm() < 1e-14);
    CHECK(ones.dot(sys.mass * ones) == Approx(2.0));
    CHECK_THROWS(assemble_interval(0.0, 4));
}

TEST_CASE("interpolated test function approaches the closed-form Rayleigh quotient")
{
    // the deformed test function has zero mean, so its quotient is the stated upper bound
    for (double b : {0.3, 0.8}) {
        const auto m = mesh_of(Polygon::from(right_triangle(b)), 6);
        const auto sys = assemble(m, BoundarySpec::all_neumann(3));
        const auto f = interpolate(m, [b](Point2 p) { return isobound_test_function(b, p); });
        const auto f0 = mean_zero_project(sys, f);
        CHECK(rayleigh_quotient(sys, f0) == Approx(bound_isosceles_upper(b)).epsilon(2e-3));
    }
    CHECK(bound_isosceles_upper(0.3) == Approx(32.6596386331685).epsilon(1e-12));
}
