#include "trispec/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace trispec {

FEFunction interpolate(std::shared_ptr<const Mesh> mesh, const std::function<double(Point2)>& f)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(mesh->vertices.size()));
    for (std::size_t i = 0; i < mesh->vertices.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(mesh->vertices[i]);
    return {std::move(mesh), std::move(v)};
}

Eigen::VectorXd AssembledSystem::restrict(const Eigen::VectorXd& vertex_values) const
{
    if (static_cast<std::size_t>(vertex_values.size()) != dof_of_vertex.size())
        throw std::invalid_argument("function size does not match the mesh");
    Eigen::VectorXd out(static_cast<Eigen::Index>(free_dofs.size()));
    for (std::size_t d = 0; d < free_dofs.size(); ++d)
        out[static_cast<Eigen::Index>(d)] = vertex_values[static_cast<Eigen::Index>(free_dofs[d])];
    return out;
}

Eigen::VectorXd AssembledSystem::extend(const Eigen::VectorXd& dof_values) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_of_vertex.size()));
    for (std::size_t d = 0; d < free_dofs.size(); ++d)
        out[static_cast<Eigen::Index>(free_dofs[d])] = dof_values[static_cast<Eigen::Index>(d)];
    return out;
}

ElementMatrices element_matrices(Point2 a, Point2 b, Point2 c)
{
    const std::array<Point2, 3> p{a, b, c};
    const double area = 0.5 * cross(b - a, c - a);
    if (!(area > 0)) throw std::invalid_argument("element is degenerate or clockwise");

    // edge opposite vertex i; grad(lambda_i) is its outward-rotated copy over 2·area
    std::array<Point2, 3> e;
    for (int i = 0; i < 3; ++i) e[i] = p[(i + 2) % 3] - p[(i + 1) % 3];

    ElementMatrices em;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            em.stiffness(i, j) = (e[i].x * e[j].x + e[i].y * e[j].y) / (4.0 * area);
            em.mass(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0);
        }
    return em;
}

AssembledSystem assemble(std::shared_ptr<const Mesh> mesh, const BoundarySpec& bc)
{
    const Mesh& m = *mesh;
    if (bc.size() != m.side_count)
        throw std::invalid_argument("boundary spec has " + std::to_string(bc.size()) + " sides, mesh has " +
                                    std::to_string(m.side_count));

    AssembledSystem sys;
    sys.bc = bc;
    std::vector<bool> constrained(m.vertices.size(), false);
    for (const auto& e : m.boundary_edges)
        if (bc.is_dirichlet(e.side)) constrained[e.a] = constrained[e.b] = true;

    sys.dof_of_vertex.assign(m.vertices.size(), -1);
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        if (constrained[v]) {
            sys.constrained_dofs.push_back(v);
        } else {
            sys.dof_of_vertex[v] = static_cast<std::ptrdiff_t>(sys.free_dofs.size());
            sys.free_dofs.push_back(v);
        }
    }
    if (sys.free_dofs.empty()) throw std::invalid_argument("every vertex is constrained");

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(9 * m.cells.size());
    mt.reserve(9 * m.cells.size());
    for (const auto& c : m.cells) {
        auto em = element_matrices(m.vertices[c[0]], m.vertices[c[1]], m.vertices[c[2]]);
        for (int i = 0; i < 3; ++i) {
            auto di = sys.dof_of_vertex[c[i]];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                auto dj = sys.dof_of_vertex[c[j]];
                if (dj < 0) continue;
                kt.emplace_back(di, dj, em.stiffness(i, j));
                mt.emplace_back(di, dj, em.mass(i, j));
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(sys.free_dofs.size());
    sys.stiffness.resize(n, n);
    sys.mass.resize(n, n);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    sys.mesh = std::move(mesh);
    return sys;
}

AssembledSystem assemble_interval(double length, int cells)
{
    if (!(length > 0) || cells < 1) throw std::invalid_argument("interval needs positive length and cells");
    const double h = length / cells;
    const Eigen::Index n = cells + 1;
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (Eigen::Index e = 0; e < cells; ++e) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                kt.emplace_back(e + i, e + j, (i == j ? 1.0 : -1.0) / h);
                mt.emplace_back(e + i, e + j, h / 6.0 * (i == j ? 2.0 : 1.0));
            }
    }
    AssembledSystem sys;
    sys.stiffness.resize(n, n);
    sys.mass.resize(n, n);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    for (Eigen::Index v = 0; v < n; ++v) {
        sys.free_dofs.push_back(static_cast<std::size_t>(v));
        sys.dof_of_vertex.push_back(v);
    }
    return sys;
}

double rayleigh_quotient(const AssembledSystem& sys, const FEFunction& u)
{
    Eigen::VectorXd x = sys.restrict(u.values);
    double den = x.dot(sys.mass * x);
    if (!(den > 0)) throw std::invalid_argument("rayleigh quotient of a function vanishing on the free dofs");
    return x.dot(sys.stiffness * x) / den;
}

std::pair<double, double> energy_split(const Mesh& m, const FEFunction& u)
{
    if (static_cast<std::size_t>(u.values.size()) != m.vertices.size())
        throw std::invalid_argument("function size does not match the mesh");
    double ex = 0.0, ey = 0.0;
    for (const auto& c : m.cells) {
        const Point2 a = m.vertices[c[0]], b = m.vertices[c[1]], d = m.vertices[c[2]];
        const double area2 = cross(b - a, d - a);
        const double u0 = u.values[static_cast<Eigen::Index>(c[0])];
        const double u1 = u.values[static_cast<Eigen::Index>(c[1])];
        const double u2 = u.values[static_cast<Eigen::Index>(c[2])];
        // gradient of the linear interpolant
        const double gx = ((u1 - u0) * (d.y - a.y) - (u2 - u0) * (b.y - a.y)) / area2;
        const double gy = ((u2 - u0) * (b.x - a.x) - (u1 - u0) * (d.x - a.x)) / area2;
        ex += 0.5 * area2 * gx * gx;
        ey += 0.5 * area2 * gy * gy;
    }
    return {ex, ey};
}

FEFunction mean_zero_project(const AssembledSystem& sys, const FEFunction& u)
{
    if (!sys.constrained_dofs.empty()) throw std::invalid_argument("mean_zero_project needs an all-Neumann system");
    Eigen::VectorXd x = sys.restrict(u.values);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(x.size());
    Eigen::VectorXd m1 = sys.mass * ones;
    x -= (m1.dot(x) / m1.sum()) * ones;
    return {u.mesh, sys.extend(x)};
}

}  // namespace trispec
