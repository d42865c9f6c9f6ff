#pragma once

#include "trispec/fem.hpp"

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace trispec {

struct EigenPair {
    double value = 0.0;
    FEFunction vector;  // M-normalised, zero on constrained vertices
    double residual = 0.0;
};

struct Spectrum {
    std::vector<EigenPair> pairs;  // ascending
    BoundarySpec bc;
    int level = 0;

    std::size_t size() const { return pairs.size(); }
    double value(std::size_t i) const { return pairs.at(i).value; }
};

enum class SolverMethod { Auto, Dense, Krylov };

struct SolverOptions {
    /// bound on the normwise backward error ‖Ku − λMu‖ / ((‖K‖ + |λ|‖M‖)‖u‖)
    double tol = 1e-10;
    int max_iterations = 200;
    SolverMethod method = SolverMethod::Auto;
    /// Auto switches to the sparse iteration above this dimension
    Eigen::Index dense_limit = 600;
    /// positive shift keeping K + shift·M definite for Neumann problems
    double shift = 1.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals))
    {
    }
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// The k smallest eigenpairs of the pencil (K, M).
Spectrum smallest_eigenpairs(const AssembledSystem& sys, int k, const SolverOptions& opts = {});

/// Normwise backward error of an approximate eigenpair of (K, M).
double eigen_residual(const AssembledSystem& sys, double value, const Eigen::VectorXd& dof_vector);

struct LevelRange {
    int base = 0;
    int count = 2;

    int finest() const { return base + count - 1; }
};

/// Nested meshes of `polygon` at levels base .. base+count-1.
std::vector<std::shared_ptr<const Mesh>> nested_meshes(const Polygon& polygon, LevelRange levels);

std::vector<Spectrum> solve_sequence(const std::vector<std::shared_ptr<const Mesh>>& meshes, const BoundarySpec& bc,
                                     int k, const SolverOptions& opts = {});
std::vector<Spectrum> solve_sequence(const Polygon& polygon, const BoundarySpec& bc, LevelRange levels, int k,
                                     const SolverOptions& opts = {});

/// Extrapolated eigenvalue with an error bar.
struct Estimate {
    double value = 0.0;
    double error_bar = 0.0;
    std::vector<double> per_level;
    std::vector<int> levels;
    /// p in λ_ℓ ≈ λ + C·4^(−pℓ); P1 eigenvalues on smooth problems give p ≈ 1
    double observed_order = 0.0;
    /// set when the sequence was not monotone and contracting
    bool flagged = false;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Fits λ_ℓ = λ + C·4^(−pℓ) through the last three values. With four or more
/// values the bar is the change between the last two extrapolants; with three
/// it is the size of the correction itself. `residual` is the relative solver
/// residual at the finest level and is added as |λ|·residual.
Estimate extrapolate(std::span<const double> values, double residual = 0.0);

/// A value known in closed form (zero error bar).
Estimate exact_estimate(double value);

/// Extrapolates eigenvalue `index` across a solve_sequence result.
Estimate estimate_index(const std::vector<Spectrum>& seq, std::size_t index);

/// Groups consecutive eigenvalues whose gap is below rel_gap times the larger.
std::vector<std::vector<std::size_t>> degeneracy_clusters(const Spectrum& spec, double rel_gap = 1e-6);
std::vector<std::vector<std::size_t>> degeneracy_clusters(std::span<const double> sorted_values, double rel_gap = 1e-6);

/// True when `values` never increases by more than rel_tol·|value|.
bool nonincreasing(std::span<const double> values, double rel_tol = 1e-10);

}  // namespace trispec
