#pragma once

#include "trispec/geometry.hpp"
#include "trispec/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace trispec {

using SpMat = Eigen::SparseMatrix<double>;

/// Piecewise-linear function given by its nodal values on a mesh.
struct FEFunction {
    std::shared_ptr<const Mesh> mesh;
    Eigen::VectorXd values;
};

FEFunction interpolate(std::shared_ptr<const Mesh> mesh, const std::function<double(Point2)>& f);

/// Stiffness/mass pair restricted to the unconstrained vertices. A vertex is
/// constrained iff it lies on a Dirichlet side (junctions with Neumann sides
/// included).
struct AssembledSystem {
    std::shared_ptr<const Mesh> mesh;
    BoundarySpec bc;
    SpMat stiffness;
    SpMat mass;
    std::vector<std::size_t> free_dofs;
    std::vector<std::size_t> constrained_dofs;
    /// dof index of each vertex, or -1 for constrained vertices
    std::vector<std::ptrdiff_t> dof_of_vertex;

    Eigen::Index dimension() const { return stiffness.rows(); }
    Eigen::VectorXd restrict(const Eigen::VectorXd& vertex_values) const;
    /// Extends dof values to all vertices, zero on constrained ones.
    Eigen::VectorXd extend(const Eigen::VectorXd& dof_values) const;
};

struct ElementMatrices {
    Eigen::Matrix3d stiffness;
    Eigen::Matrix3d mass;
};

/// Closed-form P1 element matrices of a counterclockwise triangle.
ElementMatrices element_matrices(Point2 a, Point2 b, Point2 c);

AssembledSystem assemble(std::shared_ptr<const Mesh> mesh, const BoundarySpec& bc);

/// P1 system of the interval [0, length] split into `cells` equal pieces,
/// Neumann at both ends.
AssembledSystem assemble_interval(double length, int cells);

/// (uᵀKu)/(uᵀMu) over the free dofs of `sys`.
double rayleigh_quotient(const AssembledSystem& sys, const FEFunction& u);

/// (∫u_x², ∫u_y²) computed cell-wise from the piecewise gradient.
std::pair<double, double> energy_split(const Mesh& m, const FEFunction& u);

/// Removes the mass-weighted mean so the result is mass-orthogonal to constants.
FEFunction mean_zero_project(const AssembledSystem& sys, const FEFunction& u);

}  // namespace trispec
