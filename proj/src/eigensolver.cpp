#include "trispec/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>

namespace trispec {

namespace {

double one_norm(const SpMat& a)
{
    double best = 0.0;
    for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
        double s = 0.0;
        for (SpMat::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

// Deterministic sign: positive mass-weighted mean, or positive first
// significant entry for modes orthogonal to constants.
void fix_sign(const SpMat& mass, Eigen::Ref<Eigen::VectorXd> u)
{
    const Eigen::VectorXd m1 = mass * Eigen::VectorXd::Ones(u.size());
    const double mean = m1.dot(u);
    const double scale = std::sqrt(std::max(m1.sum(), 1e-300));
    if (std::abs(mean) > 1e-6 * scale) {
        if (mean < 0) u = -u;
        return;
    }
    const double peak = u.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) > 1e-6 * peak) {
            if (u[i] < 0) u = -u;
            return;
        }
    }
}

struct RawPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // dof space, M-orthonormal columns
};

RawPairs dense_solve(const AssembledSystem& sys, int k)
{
    Eigen::MatrixXd K(sys.stiffness), M(sys.mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolver failed", {});
    return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k)};
}

// M-orthonormalises W against the M-orthonormal basis V and internally.
// Columns that collapse numerically are dropped.
Eigen::MatrixXd m_orthonormalize(const SpMat& mass, const Eigen::MatrixXd& V, Eigen::MatrixXd W)
{
    for (int pass = 0; pass < 2; ++pass) {
        if (V.cols() > 0) W -= V * (V.transpose() * (mass * W));
        Eigen::MatrixXd G = W.transpose() * (mass * W);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        const Eigen::VectorXd& lam = es.eigenvalues();
        const double top = lam.size() ? lam.maxCoeff() : 0.0;
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            if (lam[i] > 1e-20 * std::max(top, 1e-300) && lam[i] > 0) keep.push_back(i);
        Eigen::MatrixXd T(W.cols(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j)
            T.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(lam[keep[j]]);
        W = W * T;
        if (W.cols() == 0) break;
    }
    return W;
}

RawPairs krylov_solve(const AssembledSystem& sys, int k, const SolverOptions& opts, std::vector<double>& residuals)
{
    const SpMat& K = sys.stiffness;
    const SpMat& M = sys.mass;
    const Eigen::Index n = K.rows();

    SpMat shifted = K + opts.shift * M;
    Eigen::SimplicialLDLT<SpMat> ldlt(shifted);
    if (ldlt.info() != Eigen::Success) throw SolverError("factorisation of K + shift·M failed", {});

    const Eigen::Index block = std::min<Eigen::Index>(n, k + std::max(k, 6));
    const int depth = 4;

    std::mt19937_64 rng(20140331);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd X(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = dist(rng);

    const double knorm = one_norm(K), mnorm = one_norm(M);
    RawPairs best;
    residuals.assign(static_cast<std::size_t>(k), 1.0);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        Eigen::MatrixXd V = m_orthonormalize(M, Eigen::MatrixXd(n, 0), X);
        Eigen::MatrixXd last = V;
        for (int d = 1; d < depth && V.cols() < n && last.cols() > 0; ++d) {
            Eigen::MatrixXd W = ldlt.solve(M * last);
            W = m_orthonormalize(M, V, W);
            if (V.cols() + W.cols() > n) W = W.leftCols(n - V.cols());
            Eigen::MatrixXd grown(n, V.cols() + W.cols());
            grown << V, W;
            V = std::move(grown);
            last = std::move(W);
        }

        Eigen::MatrixXd H = V.transpose() * (K * V);
        H = 0.5 * (H + H.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        const Eigen::Index keep = std::min<Eigen::Index>(block, V.cols());
        Eigen::MatrixXd ritz = V * es.eigenvectors().leftCols(keep);
        Eigen::VectorXd theta = es.eigenvalues().head(keep);
        if (keep < k) throw SolverError("Krylov space smaller than the number of requested pairs", residuals);

        bool converged = true;
        for (int i = 0; i < k; ++i) {
            const Eigen::VectorXd u = ritz.col(i);
            const double r = (K * u - theta[i] * (M * u)).norm() / ((knorm + std::abs(theta[i]) * mnorm) * u.norm());
            residuals[static_cast<std::size_t>(i)] = r;
            converged = converged && r <= opts.tol;
        }
        best = {theta.head(k), ritz.leftCols(k)};
        if (converged) return best;
        X = ritz;
    }
    throw SolverError("block Krylov iteration did not converge", residuals);
}

}  // namespace

double eigen_residual(const AssembledSystem& sys, double value, const Eigen::VectorXd& u)
{
    const double denom = (one_norm(sys.stiffness) + std::abs(value) * one_norm(sys.mass)) * u.norm();
    return (sys.stiffness * u - value * (sys.mass * u)).norm() / denom;
}

Spectrum smallest_eigenpairs(const AssembledSystem& sys, int k, const SolverOptions& opts)
{
    const Eigen::Index n = sys.dimension();
    if (k < 1) throw std::invalid_argument("need at least one eigenpair");
    if (k > n) throw std::invalid_argument("requested more eigenpairs than the system dimension");
    if (!(opts.tol > 0)) throw std::invalid_argument("tolerance must be positive");

    const bool dense = opts.method == SolverMethod::Dense || (opts.method == SolverMethod::Auto && n <= opts.dense_limit);
    RawPairs raw;
    std::vector<double> residuals;
    raw = dense ? dense_solve(sys, k) : krylov_solve(sys, k, opts, residuals);

    Spectrum spec;
    spec.bc = sys.bc;
    spec.level = sys.mesh ? sys.mesh->level : 0;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd u = raw.vectors.col(i);
        u /= std::sqrt(u.dot(sys.mass * u));
        fix_sign(sys.mass, u);
        EigenPair pair;
        pair.value = raw.values[i];
        pair.residual = eigen_residual(sys, pair.value, u);
        pair.vector = FEFunction{sys.mesh, sys.extend(u)};
        if (pair.residual > opts.tol)
            throw SolverError("eigenpair " + std::to_string(i) + " misses the residual tolerance", {pair.residual});
        spec.pairs.push_back(std::move(pair));
    }
    return spec;
}

std::vector<std::shared_ptr<const Mesh>> nested_meshes(const Polygon& polygon, LevelRange levels)
{
    if (levels.count < 1 || levels.base < 0) throw std::invalid_argument("bad level range");
    std::vector<std::shared_ptr<const Mesh>> out;
    Mesh m = refine_to(triangulate(polygon), levels.base);
    for (int i = 0; i < levels.count; ++i) {
        if (i > 0) m = refine_uniform(m);
        out.push_back(std::make_shared<const Mesh>(m));
    }
    return out;
}

std::vector<Spectrum> solve_sequence(const std::vector<std::shared_ptr<const Mesh>>& meshes, const BoundarySpec& bc,
                                     int k, const SolverOptions& opts)
{
    if (meshes.size() < 2) throw std::invalid_argument("solve_sequence needs at least two levels");
    std::vector<Spectrum> out;
    for (const auto& m : meshes) out.push_back(smallest_eigenpairs(assemble(m, bc), k, opts));
    return out;
}

std::vector<Spectrum> solve_sequence(const Polygon& polygon, const BoundarySpec& bc, LevelRange levels, int k,
                                     const SolverOptions& opts)
{
    if (levels.count < 2) throw std::invalid_argument("solve_sequence needs at least two levels");
    return solve_sequence(nested_meshes(polygon, levels), bc, k, opts);
}

Estimate extrapolate(std::span<const double> values, double residual)
{
    if (values.size() < 3) throw std::invalid_argument("extrapolation needs at least three levels");
    Estimate e;
    e.per_level.assign(values.begin(), values.end());
    const std::size_t n = values.size();
    const double last = values[n - 1];
    const double scale = std::max({std::abs(values[n - 1]), std::abs(values[n - 2]), std::abs(values[n - 3])});
    const double residual_term = std::abs(last) * residual;

    // Aitken step on the triple ending at index j; false if not monotone and contracting
    auto fit = [&](std::size_t j, double& value, double& correction, double& order) {
        const double d1 = values[j - 1] - values[j - 2];
        const double d2 = values[j] - values[j - 1];
        const double q = d2 / d1;
        if (d1 == 0.0 || !(q > 0.0) || !(q < 1.0)) return false;
        correction = d2 * q / (1.0 - q);
        value = values[j] + correction;
        order = -std::log(q) / std::log(4.0);
        return true;
    };

    const double d_last = values[n - 1] - values[n - 2];
    const double d_prev = values[n - 2] - values[n - 3];
    if (std::abs(d_last) <= 1e-14 * std::max(scale, 1.0) && std::abs(d_prev) <= 1e-14 * std::max(scale, 1.0)) {
        // converged to rounding: nothing to extrapolate
        e.value = last;
        e.error_bar = std::abs(d_last) + residual_term;
        e.observed_order = 0.0;
        return e;
    }

    double value = 0, correction = 0, order = 0;
    if (!fit(n - 1, value, correction, order)) {
        e.value = last;
        e.error_bar = std::abs(d_last) + residual_term;
        e.flagged = true;
        return e;
    }
    e.value = value;
    e.observed_order = order;
    double prev_value = 0, prev_correction = 0, prev_order = 0;
    if (n >= 4 && fit(n - 2, prev_value, prev_correction, prev_order))
        e.error_bar = std::abs(value - prev_value) + residual_term;
    else
        e.error_bar = std::abs(correction) + residual_term;
    return e;
}

Estimate exact_estimate(double value)
{
    Estimate e;
    e.value = value;
    return e;
}

Estimate estimate_index(const std::vector<Spectrum>& seq, std::size_t index)
{
    std::vector<double> values;
    for (const auto& s : seq) values.push_back(s.value(index));
    Estimate e = extrapolate(values, seq.back().pairs.at(index).residual);
    for (const auto& s : seq) e.levels.push_back(s.level);
    return e;
}

std::vector<std::vector<std::size_t>> degeneracy_clusters(std::span<const double> v, double rel_gap)
{
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0 && !out.empty()) {
            const double larger = std::max(std::abs(v[i]), std::abs(v[i - 1]));
            if (v[i] - v[i - 1] < rel_gap * larger) {
                out.back().push_back(i);
                continue;
            }
        }
        out.push_back({i});
    }
    return out;
}

std::vector<std::vector<std::size_t>> degeneracy_clusters(const Spectrum& spec, double rel_gap)
{
    std::vector<double> v;
    for (const auto& p : spec.pairs) v.push_back(p.value);
    return degeneracy_clusters(v, rel_gap);
}

bool nonincreasing(std::span<const double> values, double rel_tol)
{
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[i - 1] + rel_tol * std::max(std::abs(values[i - 1]), 1.0)) return false;
    return true;
}

}  // namespace trispec
