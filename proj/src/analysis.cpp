#include "trispec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace trispec {

namespace {

constexpr double pi = std::numbers::pi;

// Collects every admissible (m, n) with value(m, n) <= cutoff, doubling the
// cutoff until `count` values are available. value must increase in each index.
std::vector<double> lattice_values(const std::function<double(int, int)>& value, int first,
                                   const std::function<bool(int, int)>& admissible, std::size_t count)
{
    double cutoff = std::max(value(first, first + 1), 1.0);
    for (;;) {
        std::vector<double> found;
        for (int m = first; value(m, first) <= cutoff; ++m)
            for (int n = first; value(m, n) <= cutoff; ++n)
                if (admissible(m, n)) found.push_back(value(m, n));
        if (found.size() >= count) {
            std::sort(found.begin(), found.end());
            found.resize(count);
            return found;
        }
        cutoff *= 2.0;
    }
}

// 1D frequencies on [0,1] with the given end conditions, in units of π.
double frequency(Condition left, Condition right, int k)
{
    if (left == Condition::Neumann && right == Condition::Neumann) return k;
    if (left == Condition::Dirichlet && right == Condition::Dirichlet) return k + 1;
    return k + 0.5;
}

}  // namespace

std::string to_string(DomainKind kind)
{
    switch (kind) {
    case DomainKind::RightIsosceles: return "right-isosceles";
    case DomainKind::Equilateral: return "equilateral";
    case DomainKind::HalfEquilateral: return "half-equilateral";
    case DomainKind::Interval: return "interval";
    }
    return "?";
}

ClosedFormSpectrum closed_form(DomainKind kind, const BoundarySpec& bc, std::size_t count, double size)
{
    if (!(size > 0)) throw std::invalid_argument("closed_form: size must be positive");
    ClosedFormSpectrum out{kind, bc, size, {}};
    const auto always = [](int, int) { return true; };

    switch (kind) {
    case DomainKind::Interval: {
        if (bc.size() != 2) throw std::invalid_argument("interval spectrum needs two end conditions");
        for (std::size_t k = 0; k < count; ++k) {
            double w = frequency(bc[0], bc[1], static_cast<int>(k)) * pi / size;
            out.values.push_back(w * w);
        }
        return out;
    }
    case DomainKind::RightIsosceles: {
        if (bc.size() != 3) throw std::invalid_argument("triangle spectrum needs three side conditions");
        // Reflection across the hypotenuse gives the square [0,ℓ]²; modes are
        // (anti)symmetrised products of 1D modes for the two legs' conditions.
        const Condition leg_x = bc[0], leg_y = bc[2];
        const bool hyp_dirichlet = bc.is_dirichlet(1);
        auto value = [&](int m, int n) {
            double a = frequency(leg_y, leg_x, m), c = frequency(leg_y, leg_x, n);
            return pi * pi * (a * a + c * c) / (size * size);
        };
        auto admissible = [&](int m, int n) { return hyp_dirichlet ? m < n : m <= n; };
        out.values = lattice_values(value, 0, admissible, count);
        return out;
    }
    case DomainKind::Equilateral: {
        if (bc.size() != 3) throw std::invalid_argument("triangle spectrum needs three side conditions");
        const bool dirichlet = bc.is_dirichlet(0);
        if (bc.is_dirichlet(1) != dirichlet || bc.is_dirichlet(2) != dirichlet)
            throw UnsupportedClosedForm("equilateral triangle: mixed conditions have no closed form");
        const double unit = 16.0 * pi * pi / (9.0 * size * size);
        auto value = [&](int m, int n) { return unit * (m * m + m * n + n * n); };
        out.values = lattice_values(value, dirichlet ? 1 : 0, always, count);
        return out;
    }
    case DomainKind::HalfEquilateral: {
        if (bc.size() != 3) throw std::invalid_argument("triangle spectrum needs three side conditions");
        // Mirroring across M gives the equilateral triangle with side `size`;
        // S and L become its sides, M its altitude.
        const bool m_dirichlet = bc.is_dirichlet(0), l_dirichlet = bc.is_dirichlet(1), s_dirichlet = bc.is_dirichlet(2);
        if (l_dirichlet != s_dirichlet)
            throw UnsupportedClosedForm(
                "half-equilateral triangle: this condition maps to a mixed problem on the equilateral triangle, "
                "which has no closed form");
        const double unit = 16.0 * pi * pi / (9.0 * size * size);
        auto value = [&](int m, int n) { return unit * (m * m + m * n + n * n); };
        // even modes across the altitude: one per unordered pair; odd ones need m != n
        auto admissible = [&](int m, int n) { return m_dirichlet ? m < n : m <= n; };
        out.values = lattice_values(value, l_dirichlet ? 1 : 0, admissible, count);
        return out;
    }
    }
    throw std::invalid_argument("unknown domain kind");
}

double bound_hooker_protter(double b)
{
    if (!(b > 0) || b > 1) throw std::invalid_argument("b must lie in (0, 1]");
    return pi * pi * (1 + b) * (1 + b) / (4 * b * b);
}

double bound_isosceles_upper(double b)
{
    if (!(b > 0) || b > 1) throw std::invalid_argument("b must lie in (0, 1]");
    const double d = (b - 1) * (b - 1);
    return (3 * pi * pi * (d + 2) * (b * b + 1) - 64 * d * (b + 1)) / (3 * b * b * (d + 4));
}

double bound_gap_quadratic(double b) { return 9 * pi * pi * b * b - (256 + 6 * pi * pi) * b + 21 * pi * pi - 256; }

double bound_gap(double b)
{
    const double d = (b - 1) * (b - 1);
    return d / (12 * b * b * (d + 4)) * bound_gap_quadratic(b);
}

std::pair<double, double> bound_obtuse_upper(double h)
{
    if (!(h > 0) || h > std::sqrt(0.5) * (1 + 1e-15)) throw std::invalid_argument("h must lie in (0, 1/sqrt(2)]");
    const double den = 4 * h * h * (1 - h * h);
    return {(pi * pi + 16 * h * h - 8) / den, pi * pi / den};
}

double isobound_test_function(double b, Point2 p)
{
    const double x = p.x, y = p.y / b;
    const double phi1 = std::cos(pi * y) - std::cos(pi * x);
    const double phi2 = std::cos(pi * y) * std::cos(pi * x);
    return phi1 - (1 - b) * phi2;
}

double obtuse_test_function(double h, Point2 p)
{
    const double x = p.x / std::sqrt(1 - h * h), y = p.y / h;
    return std::sin(pi * x / 2) * std::cos(pi * y / 2);
}

CondRatio cond_ratio(const Mesh& m, const FEFunction& u, double beta)
{
    auto [ex, ey] = energy_split(m, u);
    const double t = std::tan(beta);
    if (ex == 0.0) return {std::numeric_limits<double>::infinity(), true};
    const double ratio = ey / ex;
    return {ratio, ratio > t * t};
}

int nodal_domain_count(const Mesh& m, const FEFunction& u, double eps_rel)
{
    const auto& v = u.values;
    if (static_cast<std::size_t>(v.size()) != m.vertices.size())
        throw std::invalid_argument("function size does not match the mesh");
    const double peak = v.cwiseAbs().maxCoeff();
    if (!(peak > 0)) throw NumericallyZero("nodal count of a zero function");
    const double eps = eps_rel * peak;

    auto sign = [&](std::size_t i) {
        double x = v[static_cast<Eigen::Index>(i)];
        return x > eps ? 1 : (x < -eps ? -1 : 0);
    };

    std::vector<std::size_t> parent(m.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& c : m.cells)
        for (int e = 0; e < 3; ++e) {
            std::size_t a = c[e], b = c[(e + 1) % 3];
            if (sign(a) != 0 && sign(a) == sign(b)) parent[find(a)] = find(b);
        }
    int count = 0;
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        if (sign(i) != 0 && find(i) == i) ++count;
    if (count == 0) throw NumericallyZero("every vertex lies below the nodal threshold");
    return count;
}

std::string to_string(SymClass c)
{
    switch (c) {
    case SymClass::SS: return "SS";
    case SymClass::SA: return "SA";
    case SymClass::AS: return "AS";
    case SymClass::AA: return "AA";
    }
    return "?";
}

namespace {

Eigen::VectorXd permuted(const Eigen::VectorXd& u, const SymmetryMap& map)
{
    Eigen::VectorXd w(u.size());
    for (Eigen::Index v = 0; v < u.size(); ++v) w[v] = u[static_cast<Eigen::Index>(map.permutation.at(static_cast<std::size_t>(v)))];
    return w;
}

double m_inner(const AssembledSystem& sys, const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return sys.restrict(a).dot(sys.mass * sys.restrict(b));
}

std::array<int, 2> parity(SymClass c)
{
    switch (c) {
    case SymClass::SS: return {1, 1};
    case SymClass::SA: return {1, -1};
    case SymClass::AS: return {-1, 1};
    case SymClass::AA: return {-1, -1};
    }
    return {0, 0};
}

}  // namespace

ModeSymmetry symmetry_class(const AssembledSystem& sys, const FEFunction& u, const SymmetryMap& long_diagonal,
                            const SymmetryMap& short_diagonal)
{
    const double norm = m_inner(sys, u.values, u.values);
    if (!(norm > 0)) throw ClassificationError("cannot classify a zero mode");
    ModeSymmetry s;
    s.long_score = m_inner(sys, u.values, permuted(u.values, long_diagonal)) / norm;
    s.short_score = m_inner(sys, u.values, permuted(u.values, short_diagonal)) / norm;
    if (std::abs(s.long_score) <= 0.99 || std::abs(s.short_score) <= 0.99)
        throw ClassificationError("mode is neither symmetric nor antisymmetric (scores " + std::to_string(s.long_score) +
                                  ", " + std::to_string(s.short_score) + ")");
    for (std::size_t i = 0; i < kAllClasses.size(); ++i) {
        auto [pl, ps] = parity(kAllClasses[i]);
        if ((s.long_score > 0) == (pl > 0) && (s.short_score > 0) == (ps > 0)) {
            s.dims[i] = 1;
            s.label = to_string(kAllClasses[i]);
        }
    }
    return s;
}

ModeSymmetry cluster_symmetry(const AssembledSystem& sys, const std::vector<FEFunction>& cluster,
                              const SymmetryMap& long_diagonal, const SymmetryMap& short_diagonal)
{
    if (cluster.empty()) throw ClassificationError("empty cluster");
    if (cluster.size() == 1) return symmetry_class(sys, cluster.front(), long_diagonal, short_diagonal);

    ModeSymmetry s;
    s.label = "degenerate-cluster";
    std::array<double, 4> trace{};
    for (const auto& u : cluster) {
        const Eigen::VectorXd& x = u.values;
        const Eigen::VectorXd xl = permuted(x, long_diagonal);
        const Eigen::VectorXd xs = permuted(x, short_diagonal);
        const Eigen::VectorXd xls = permuted(xl, short_diagonal);
        const double norm = m_inner(sys, x, x);
        s.long_score += m_inner(sys, x, xl) / norm / static_cast<double>(cluster.size());
        s.short_score += m_inner(sys, x, xs) / norm / static_cast<double>(cluster.size());
        for (std::size_t i = 0; i < kAllClasses.size(); ++i) {
            auto [pl, ps] = parity(kAllClasses[i]);
            Eigen::VectorXd proj = 0.25 * (x + pl * xl + ps * xs + pl * ps * xls);
            trace[i] += m_inner(sys, x, proj) / norm;
        }
    }
    int total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double r = std::round(trace[i]);
        if (std::abs(trace[i] - r) > 0.05)
            throw ClassificationError("cluster is not invariant under the diagonal reflections");
        s.dims[i] = static_cast<int>(r);
        total += s.dims[i];
    }
    if (total != static_cast<int>(cluster.size())) throw ClassificationError("cluster projection dimensions disagree");
    return s;
}

std::vector<ModeSymmetry> classify_spectrum(const AssembledSystem& sys, const Spectrum& spec,
                                            const SymmetryMap& long_diagonal, const SymmetryMap& short_diagonal,
                                            double rel_gap)
{
    std::vector<ModeSymmetry> out(spec.size());
    for (const auto& cluster : degeneracy_clusters(spec, rel_gap)) {
        std::vector<FEFunction> modes;
        for (auto i : cluster) modes.push_back(spec.pairs[i].vector);
        ModeSymmetry s = cluster_symmetry(sys, modes, long_diagonal, short_diagonal);
        for (auto i : cluster) out[i] = s;
    }
    return out;
}

RhombusSolve solve_rhombus(const Triangle& t, int level, bool neumann, int k, const SolverOptions& opts)
{
    SymmetricRhombusMesh srm = symmetric_rhombus_mesh(t, level);
    RhombusSolve r;
    r.mesh = std::make_shared<const Mesh>(std::move(srm.mesh));
    r.long_diagonal = std::move(srm.long_diagonal);
    r.short_diagonal = std::move(srm.short_diagonal);
    r.system = assemble(r.mesh, neumann ? BoundarySpec::all_neumann(4) : BoundarySpec::all_dirichlet(4));
    r.spectrum = smallest_eigenpairs(r.system, k, opts);
    r.classes = classify_spectrum(r.system, r.spectrum, r.long_diagonal, r.short_diagonal);
    return r;
}

std::vector<RhombusSolve> solve_rhombus_sequence(const Triangle& t, LevelRange levels, bool neumann, int k,
                                                 const SolverOptions& opts)
{
    std::vector<RhombusSolve> out;
    for (int l = levels.base; l <= levels.finest(); ++l) out.push_back(solve_rhombus(t, l, neumann, k, opts));
    return out;
}

std::vector<double> class_values(const std::vector<RhombusSolve>& seq, SymClass cls)
{
    std::vector<double> out;
    for (const auto& r : seq) {
        double v = std::numeric_limits<double>::quiet_NaN();
        const std::size_t first = r.spectrum.bc.all_neumann() ? 1 : 0;
        for (std::size_t i = first; i < r.classes.size(); ++i)
            if (r.classes[i].has(cls)) {
                v = r.spectrum.value(i);
                break;
            }
        out.push_back(v);
    }
    return out;
}

bool MatchingReport::all_matched() const
{
    return !entries.empty() &&
           std::all_of(entries.begin(), entries.end(), [](const MatchEntry& e) { return e.found && e.matched; });
}

MatchingReport triangle_to_rhombus_matching(const Triangle& t, LevelRange levels, int neumann_modes,
                                            int dirichlet_modes, const SolverOptions& opts)
{
    return triangle_to_rhombus_matching(t, levels, solve_rhombus_sequence(t, levels, true, neumann_modes, opts),
                                        solve_rhombus_sequence(t, levels, false, dirichlet_modes, opts), opts);
}

MatchingReport triangle_to_rhombus_matching(const Triangle& t, LevelRange levels,
                                            const std::vector<RhombusSolve>& neumann,
                                            const std::vector<RhombusSolve>& dirichlet, const SolverOptions& opts)
{
    if (neumann.size() != static_cast<std::size_t>(levels.count) ||
        dirichlet.size() != static_cast<std::size_t>(levels.count))
        throw std::invalid_argument("rhombus solves do not cover the level range");
    const Rhombus rh = rhombus_from_right_triangle(t);
    const double a = rh.long_leg, c = rh.short_leg;
    // same placement as the rhombus quarter so the meshes coincide
    const Polygon quarter({Point2{0, 0}, Point2{a, 0}, Point2{0, c}});
    const auto meshes = nested_meshes(quarter, levels);

    struct Row {
        const char* label;
        std::vector<std::size_t> dirichlet;  // quarter sides: 0 = long leg, 1 = hypotenuse, 2 = short leg
        std::size_t index;
        bool neumann_rhombus;
        SymClass cls;
    };
    const std::vector<Row> rows{
        {"lambda1^S", {2}, 0, true, SymClass::SA},       {"lambda1^M", {0}, 0, true, SymClass::AS},
        {"mu2", {}, 1, true, SymClass::SS},              {"lambda1^MS", {0, 2}, 0, true, SymClass::AA},
        {"lambda1^L", {1}, 0, false, SymClass::SS},      {"lambda1^LS", {1, 2}, 0, false, SymClass::SA},
    };

    MatchingReport report;
    report.b = c / a;
    for (const auto& row : rows) {
        MatchEntry e;
        e.triangle_label = row.label;
        e.rhombus_label = std::string(row.neumann_rhombus ? "Neumann " : "Dirichlet ") + to_string(row.cls);
        auto seq = solve_sequence(meshes, BoundarySpec::dirichlet_on(3, row.dirichlet), static_cast<int>(row.index) + 1, opts);
        e.triangle = estimate_index(seq, row.index);
        const auto values = class_values(row.neumann_rhombus ? neumann : dirichlet, row.cls);
        e.found = std::none_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
        if (e.found) {
            e.rhombus = extrapolate(values);
            e.rhombus.levels = e.triangle.levels;
            e.difference = std::abs(e.triangle.value - e.rhombus.value);
            e.combined_bar = e.triangle.error_bar + e.rhombus.error_bar;
            e.matched = e.difference <= e.combined_bar + 1e-10 * std::abs(e.triangle.value);
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace trispec
