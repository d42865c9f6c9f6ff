#include "trispec/commands.hpp"

#include "trispec/svg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace trispec {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x, int digits = 6)
{
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::vector<int> level_list(LevelRange r)
{
    std::vector<int> out;
    for (int l = r.base; l <= r.finest(); ++l) out.push_back(l);
    return out;
}

// Collected over a sweep and written as aggregate properties.
struct SweepStats {
    std::size_t sequences = 0;
    std::vector<std::string> nonmonotone;
    std::size_t first_modes = 0;
    std::vector<std::string> bad_first;
    std::size_t mu2_modes = 0;
    std::vector<std::string> bad_mu2;
    std::size_t max_residual_count = 0;
    double max_residual = 0.0;

    void sequence(const std::string& label, const std::vector<Spectrum>& seq, std::size_t first_index)
    {
        ++sequences;
        for (std::size_t i = first_index; i < seq.front().size(); ++i) {
            std::vector<double> v;
            for (const auto& s : seq) v.push_back(s.value(i));
            if (!nonincreasing(v)) nonmonotone.push_back(label + "[" + std::to_string(i + 1) + "]");
        }
        for (const auto& s : seq)
            for (const auto& p : s.pairs) {
                max_residual = std::max(max_residual, p.residual);
                ++max_residual_count;
            }
    }

    void first_mode(const std::string& label, const EigenPair& p)
    {
        ++first_modes;
        int n = nodal_domain_count(*p.vector.mesh, p.vector);
        if (n != 1) bad_first.push_back(label + ":" + std::to_string(n));
    }

    void second_neumann(const std::string& label, const EigenPair& p)
    {
        ++mu2_modes;
        int n = nodal_domain_count(*p.vector.mesh, p.vector);
        if (n != 2) bad_mu2.push_back(label + ":" + std::to_string(n));
    }

    void merge(const SweepStats& o, const std::string& prefix)
    {
        sequences += o.sequences;
        for (const auto& s : o.nonmonotone) nonmonotone.push_back(prefix + s);
        first_modes += o.first_modes;
        for (const auto& s : o.bad_first) bad_first.push_back(prefix + s);
        mu2_modes += o.mu2_modes;
        for (const auto& s : o.bad_mu2) bad_mu2.push_back(prefix + s);
        max_residual = std::max(max_residual, o.max_residual);
        max_residual_count += o.max_residual_count;
    }

    static std::string list(const std::vector<std::string>& v)
    {
        std::string out;
        for (std::size_t i = 0; i < v.size() && i < 8; ++i) out += (i ? ", " : "") + v[i];
        if (v.size() > 8) out += ", ...";
        return out;
    }

    void emit(VerificationReport& r, double tol) const
    {
        if (sequences > 0)
            r.property("Galerkin monotonicity across levels", "values nonincreasing in every sequence",
                       nonmonotone.empty() ? "all " + std::to_string(sequences) + " sequences"
                                           : std::to_string(nonmonotone.size()) + " failures: " + list(nonmonotone),
                       nonmonotone.empty());
        if (max_residual_count > 0)
            r.property("eigenpair residuals", "<= " + fmt(tol, 3), "max " + fmt(max_residual, 3),
                       max_residual <= tol);
        if (first_modes > 0)
            r.property("nodal domains of first mixed modes", "1",
                       bad_first.empty() ? "1 for all " + std::to_string(first_modes) : list(bad_first),
                       bad_first.empty());
        if (mu2_modes > 0)
            r.property("nodal domains of mu2 modes", "2",
                       bad_mu2.empty() ? "2 for all " + std::to_string(mu2_modes) : list(bad_mu2), bad_mu2.empty());
    }
};

struct Family {
    const char* label;
    std::vector<SideLabel> dirichlet;
};

const std::vector<Family>& families()
{
    static const std::vector<Family> f{
        {"lambda1^S", {SideLabel::S}},
        {"lambda1^M", {SideLabel::M}},
        {"lambda1^L", {SideLabel::L}},
        {"lambda1^MS", {SideLabel::M, SideLabel::S}},
        {"lambda1^LS", {SideLabel::L, SideLabel::S}},
        {"lambda1^LM", {SideLabel::L, SideLabel::M}},
        {"lambda1", {SideLabel::S, SideLabel::M, SideLabel::L}},
    };
    return f;
}

// μ₁ is zero exactly; its bar is the largest computed value.
Estimate zero_mode_estimate(const std::vector<Spectrum>& seq)
{
    Estimate e;
    for (const auto& s : seq) {
        e.per_level.push_back(s.value(0));
        e.error_bar = std::max(e.error_bar, std::abs(s.value(0)));
    }
    e.value = 0.0;
    return e;
}

VerificationReport triangle_table_impl(const Triangle& t, const RunOptions& opts, LevelRange levels, SweepStats& stats)
{
    const auto sc = classify_sides(t);
    const auto meshes = nested_meshes(Polygon::from(t), levels);

    struct Job {
        std::string label;
        BoundarySpec bc;
        int k;
        std::vector<Spectrum> seq;
    };
    std::vector<Job> jobs;
    jobs.push_back({"mu", BoundarySpec::all_neumann(3), 2, {}});
    for (const auto& f : families()) {
        std::vector<std::size_t> sides;
        for (auto l : f.dirichlet) sides.push_back(sc.side(l));
        jobs.push_back({f.label, BoundarySpec::dirichlet_on(3, sides), 1, {}});
    }
    parallel_for(jobs.size(), opts.threads,
                 [&](std::size_t i) { jobs[i].seq = solve_sequence(meshes, jobs[i].bc, jobs[i].k, opts.solver); });

    VerificationReport r;
    r.levels = level_list(levels);
    const auto& v = t.vertices();
    r.params = {{"x1", v[1].x}, {"y1", v[1].y}, {"x2", v[2].x}, {"y2", v[2].y}};
    r.add("mu1", zero_mode_estimate(jobs[0].seq));
    r.add("mu2", estimate_index(jobs[0].seq, 1));
    stats.sequence("mu", jobs[0].seq, 1);
    stats.second_neumann("mu2", jobs[0].seq.back().pairs[1]);
    for (std::size_t i = 1; i < jobs.size(); ++i) {
        r.add(jobs[i].label, estimate_index(jobs[i].seq, 0));
        stats.sequence(jobs[i].label, jobs[i].seq, 0);
        stats.first_mode(jobs[i].label, jobs[i].seq.back().pairs[0]);
    }
    return r;
}

std::string side_label_name(const std::string& label)
{
    auto pos = label.find('^');
    return pos == std::string::npos ? "" : label.substr(pos + 1);
}

// Labels that a tie between side labels a and b maps onto each other.
std::string swap_labels(const std::string& label, char a, char b)
{
    auto pos = label.find('^');
    if (pos == std::string::npos) return label;
    std::string sides = label.substr(pos + 1);
    for (char& c : sides) c = c == a ? b : (c == b ? a : c);
    std::string canonical;
    for (char c : std::string("LMS"))
        if (sides.find(c) != std::string::npos) canonical += c;
    return label.substr(0, pos + 1) + canonical;
}

// Relation r, promoted to equality when the side-label ties of `sc` swap lhs and rhs.
Relation tie_relation(const SideClassification& sc, const std::string& lhs, const std::string& rhs, Relation r)
{
    const std::array<std::pair<SideLabel, char>, 3> names{{{SideLabel::S, 'S'}, {SideLabel::M, 'M'}, {SideLabel::L, 'L'}}};
    for (const auto& [la, ca] : names)
        for (const auto& [lb, cb] : names)
            if (ca < cb && sc.tied(la, lb) && swap_labels(lhs, ca, cb) == rhs) return Relation::Equal;
    return r;
}

}  // namespace

LevelRange RunOptions::range(LevelRange fallback) const
{
    LevelRange r = fallback;
    if (levels) r.count = *levels;
    if (base_level) r.base = *base_level;
    if (r.count < 3) throw std::invalid_argument("at least three levels are needed for extrapolation");
    if (r.base < 0) throw std::invalid_argument("base level must be nonnegative");
    return r;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

VerificationReport triangle_table(const Triangle& t, const RunOptions& opts, LevelRange fallback)
{
    SweepStats stats;
    auto r = triangle_table_impl(t, opts, opts.range(fallback), stats);
    stats.emit(r, opts.solver.tol);
    return r;
}

VerificationReport cmd_order(double b, const RunOptions& opts)
{
    const Triangle t = right_triangle(b);
    const LevelRange levels = opts.range(kTriangleLevels);
    SweepStats stats;
    VerificationReport r = triangle_table_impl(t, opts, levels, stats);
    const double alpha = alpha_from_b(b);
    r.domain = "right triangle (0,0), (1,0), (0," + fmt(b, 15) + ")";
    r.params = {{"b", b}, {"alpha", alpha}};

    const auto sc = classify_sides(t);
    const bool sixth = std::abs(alpha - pi / 6) <= kDefaultTieTolerance;
    const bool quarter = sc.tied(SideLabel::S, SideLabel::M);

    std::vector<std::pair<std::string, std::string>> chain{
        {"mu1", "lambda1^S"},        {"lambda1^S", "lambda1^M"},   {"lambda1^M", "mu2"},
        {"mu2", "lambda1^L"},        {"lambda1^L", "lambda1^MS"},  {"lambda1^MS", "lambda1^LS"},
        {"lambda1^LS", "lambda1^LM"}, {"lambda1^LM", "lambda1"},
    };
    if (alpha < pi / 6 && !sixth) {
        chain[2] = {"mu2", "lambda1^M"};
        chain.insert(chain.begin() + 2, {"lambda1^S", "mu2"});
    }
    for (const auto& [lhs, rhs] : chain) {
        Relation rel = tie_relation(sc, lhs, rhs, Relation::Less);
        if (sixth && lhs == "lambda1^M" && rhs == "mu2") rel = Relation::Equal;
        if (quarter && lhs == "mu2" && rhs == "lambda1^L") rel = Relation::Equal;
        r.check(lhs, rel, rhs);
    }

    // where μ₂ sits among the mixed eigenvalues
    std::vector<std::pair<double, std::string>> order;
    for (const auto& e : r.table) order.emplace_back(e.extrapolated, e.label);
    std::sort(order.begin(), order.end());
    std::string line = "observed order:";
    for (const auto& [v, l] : order) line += " " + l;
    r.observe(line);

    stats.emit(r, opts.solver.tol);
    return r;
}

Point2 conjecture_apex(const ConjectureGrid& g, int i, int j)
{
    if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("empty conjecture grid");
    auto lerp = [](double lo, double hi, int i, int n) { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1); };
    // x < 1/2 keeps the left side shortest; y below the unit circle around (1,0) keeps the base longest
    const double x = lerp(g.margin, 0.5 - g.margin, i, g.nx);
    const double top = std::sqrt(1.0 - (1.0 - x) * (1.0 - x)) - g.margin;
    if (!(top > g.margin)) throw std::invalid_argument("conjecture grid margin too large");
    return {x, lerp(g.margin, top, j, g.ny)};
}

VerificationReport cmd_conjecture(const ConjectureGrid& grid, const RunOptions& opts)
{
    const LevelRange levels = opts.range(kScanLevels);
    VerificationReport r;
    r.domain = "scalene triangles (0,0), (1,0), (x,y)";
    r.params = {{"nx", grid.nx}, {"ny", grid.ny}, {"margin", grid.margin}};
    r.levels = level_list(levels);

    struct Cell {
        std::string key;
        Point2 apex;
        bool probe = false;
        VerificationReport report;
        SweepStats stats;
    };
    std::vector<Cell> cells;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            char key[32];
            std::snprintf(key, sizeof key, "cell(%02d,%02d)/", i, j);
            cells.push_back({key, conjecture_apex(grid, i, j), false, {}, {}});
        }
    // a small perturbation of the equilateral triangle
    cells.push_back({"near-equilateral/", {0.49, 0.86}, true, {}, {}});

    RunOptions inner = opts;
    inner.threads = 1;
    parallel_for(cells.size(), opts.threads, [&](std::size_t c) {
        Cell& cell = cells[c];
        const Triangle t = triangle_from_apex(cell.apex.x, cell.apex.y);
        const auto sc = classify_sides(t);
        cell.report = triangle_table_impl(t, inner, levels, cell.stats);
        VerificationReport& cr = cell.report;
        auto chk = [&](const std::string& a, Relation rel, const std::string& b) {
            cr.check(a, tie_relation(sc, a, b, rel), b);
        };
        if (cell.probe) {
            chk("lambda1^L", Relation::Less, "mu2");
        } else {
            chk("lambda1^S", Relation::Less, "lambda1^M");
            chk("lambda1^M", Relation::Less, "lambda1^L");
            chk("lambda1^L", Relation::Less, "lambda1^MS");
            // proven for every triangle
            std::string lowest = "lambda1^S";
            for (const char* l : {"lambda1^M", "lambda1^L"})
                if (cr.operand(l).value < cr.operand(lowest).value) lowest = l;
            cr.check("min(lambda1^S,lambda1^M,lambda1^L) < mu2", Relation::Less, cr.operand(lowest), cr.operand("mu2"));
            chk("mu2", Relation::LessEqual, "lambda1^MS");
            chk("lambda1^MS", Relation::Less, "lambda1^LS");
            chk("lambda1^LS", Relation::Less, "lambda1^LM");
        }
        std::vector<std::pair<double, std::string>> order;
        for (const char* l : {"mu2", "lambda1^S", "lambda1^M", "lambda1^L", "lambda1^MS"})
            order.emplace_back(cr.operand(l).value, side_label_name(l).empty() ? "mu2" : side_label_name(l));
        std::sort(order.begin(), order.end());
        std::string line = "apex (" + fmt(cell.apex.x, 4) + ", " + fmt(cell.apex.y, 4) + "):";
        for (const auto& [v, l] : order) line += " " + l;
        cr.observe(line);
    });

    SweepStats stats;
    std::vector<std::string> inconclusive;
    for (const auto& cell : cells) {
        r.merge(cell.report, cell.key);
        stats.merge(cell.stats, cell.key);
        for (const auto& c : cell.report.checks)
            if (c.status == Status::Inconclusive) inconclusive.push_back(cell.key + c.name);
    }
    for (const auto& s : inconclusive) r.observe("inconclusive, re-run at a higher level: " + s);
    stats.emit(r, opts.solver.tol);
    return r;
}

VerificationReport cmd_rhombus(double two_alpha, const RunOptions& opts)
{
    if (!(two_alpha > 0) || two_alpha > pi / 2 + 1e-12) throw std::invalid_argument("2*alpha must lie in (0, pi/2]");
    const LevelRange levels = opts.range(kRhombusLevels);
    const double alpha = 0.5 * std::min(two_alpha, pi / 2);
    const double b = std::abs(two_alpha - pi / 2) <= 1e-12 ? 1.0 : b_from_alpha(alpha);
    const Triangle t = right_triangle(b);
    const int kn = opts.k > 0 ? std::max(opts.k, 6) : 6;
    const int kd = 3;

    std::vector<RhombusSolve> neumann(static_cast<std::size_t>(levels.count)), dirichlet(neumann.size());
    parallel_for(2 * neumann.size(), opts.threads, [&](std::size_t i) {
        const int level = levels.base + static_cast<int>(i / 2);
        if (i % 2 == 0)
            neumann[i / 2] = solve_rhombus(t, level, true, kn, opts.solver);
        else
            dirichlet[i / 2] = solve_rhombus(t, level, false, kd, opts.solver);
    });

    VerificationReport r;
    r.domain = "rhombus with smallest angle " + fmt(two_alpha, 15);
    r.params = {{"two_alpha", two_alpha}, {"b", b}};
    r.levels = level_list(levels);

    auto seq_of = [](const std::vector<RhombusSolve>& v) {
        std::vector<Spectrum> out;
        for (const auto& s : v) out.push_back(s.spectrum);
        return out;
    };
    const auto nseq = seq_of(neumann), dseq = seq_of(dirichlet);
    SweepStats stats;
    stats.sequence("rhombus Neumann", nseq, 1);
    stats.sequence("rhombus Dirichlet", dseq, 0);
    stats.first_mode("rhombus lambda1", dseq.back().pairs[0]);

    r.add("mu1", zero_mode_estimate(nseq));
    for (int i = 1; i < kn; ++i) r.add("mu" + std::to_string(i + 1), estimate_index(nseq, static_cast<std::size_t>(i)));
    for (int i = 0; i < kd; ++i) r.add("lambda" + std::to_string(i + 1), estimate_index(dseq, static_cast<std::size_t>(i)));

    // lowest mode of each parity class, followed across levels by class rather than index
    for (auto [neu, cls] : std::vector<std::pair<bool, SymClass>>{{true, SymClass::SA}, {true, SymClass::AS},
                                                                   {true, SymClass::SS}, {true, SymClass::AA},
                                                                   {false, SymClass::SS}, {false, SymClass::SA}}) {
        const auto v = class_values(neu ? neumann : dirichlet, cls);
        const std::string label = std::string(neu ? "N:" : "D:") + to_string(cls);
        if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); }))
            r.observe(label + " is not among the computed modes");
        else
            r.add(label, extrapolate(v));
    }

    // classes at the finest level
    const auto& fn = neumann.back();
    const auto& fd = dirichlet.back();
    auto class_line = [](const char* name, const RhombusSolve& s) {
        std::string line = std::string(name) + " classes:";
        for (std::size_t i = 0; i < s.classes.size(); ++i) {
            line += " " + s.classes[i].label;
            if (s.classes[i].label == "degenerate-cluster") {
                line += "(";
                for (std::size_t c = 0; c < 4; ++c)
                    if (s.classes[i].dims[c] > 0)
                        line += to_string(kAllClasses[c]) + "x" + std::to_string(s.classes[i].dims[c]);
                line += ")";
            }
        }
        return line;
    };
    r.observe(class_line("Neumann", fn));
    r.observe(class_line("Dirichlet", fd));
    if (fn.classes.size() > 4) r.observe("mu5 class: " + fn.classes[4].label);
    if (fd.classes.size() > 2) r.observe("lambda3 class: " + fd.classes[2].label);

    auto singleton_everywhere = [&](const std::vector<RhombusSolve>& seq, std::size_t idx) {
        for (const auto& s : seq)
            for (const auto& cl : degeneracy_clusters(s.spectrum))
                if (std::find(cl.begin(), cl.end(), idx) != cl.end() && cl.size() > 1) return false;
        return true;
    };
    auto class_everywhere = [&](const std::vector<RhombusSolve>& seq, std::size_t idx, SymClass cls) {
        std::string seen;
        bool ok = true;
        for (const auto& s : seq) {
            seen += (seen.empty() ? "" : ",") + s.classes[idx].label;
            ok = ok && s.classes[idx].label == to_string(cls);
        }
        return std::make_pair(ok, seen);
    };
    auto class_property = [&](const std::string& name, const std::vector<RhombusSolve>& seq, std::size_t idx,
                              SymClass cls) {
        auto [ok, seen] = class_everywhere(seq, idx, cls);
        r.property(name, to_string(cls) + " at every level", seen, ok);
    };

    const double third = pi / 3;
    const bool square = b == 1.0;
    const bool equilateral = std::abs(two_alpha - third) <= 1e-9;
    if (square) {
        const auto& cl = fn.classes[1];
        const bool ok = cl.label == "degenerate-cluster" && fn.classes[2].label == cl.label &&
                        cl.has(SymClass::SA) && cl.has(SymClass::AS) && cl.dims[1] == 1 && cl.dims[2] == 1;
        r.property("mu2-mu3 degenerate cluster", "one SA and one AS mode",
                   cl.label + " SA=" + std::to_string(cl.dims[1]) + " AS=" + std::to_string(cl.dims[2]), ok);
        r.check("mu2", Relation::Equal, "mu3");
        // both are π²/(side²/2) on the square
        r.check("mu4", Relation::Equal, "lambda1");
        class_property("mu4 class", neumann, 3, SymClass::SS);
    } else if (equilateral) {
        // the mesh lacks the threefold symmetry, so the double eigenvalue shows only after extrapolation
        r.check("mu3", Relation::Equal, "mu4");
        if (r.find("N:AS") && r.find("N:SS")) r.check("N:AS", Relation::Equal, "N:SS");
        r.check("mu2", Relation::Less, "mu3");
    } else if (two_alpha > third) {
        for (std::size_t idx : {1, 2, 3})
            r.property("mu" + std::to_string(idx + 1) + " simple", "singleton cluster at every level",
                       singleton_everywhere(neumann, idx) ? "singleton" : "clustered", singleton_everywhere(neumann, idx));
        r.property("lambda2 simple", "singleton cluster at every level",
                   singleton_everywhere(dirichlet, 1) ? "singleton" : "clustered", singleton_everywhere(dirichlet, 1));
        class_property("mu2 class", neumann, 1, SymClass::SA);
        class_property("mu3 class", neumann, 2, SymClass::AS);
        class_property("mu4 class", neumann, 3, SymClass::SS);
        class_property("lambda1 class", dirichlet, 0, SymClass::SS);
        class_property("lambda2 class", dirichlet, 1, SymClass::SA);
        r.check("mu4", Relation::Less, "lambda1");
    } else {
        class_property("doubly symmetric mode at index 3", neumann, 2, SymClass::SS);
        class_property("mu2 class", neumann, 1, SymClass::SA);
    }

    // cross-check against the mixed problems on the quarter triangle
    const MatchingReport match = triangle_to_rhombus_matching(t, levels, neumann, dirichlet, opts.solver);
    for (const auto& e : match.entries) {
        if (!e.found) {
            r.observe("matching: " + e.rhombus_label + " not among the computed modes");
            continue;
        }
        r.check("T:" + e.triangle_label + " = " + e.rhombus_label, Relation::Equal,
                {"T:" + e.triangle_label, e.triangle.value, e.triangle.error_bar, e.triangle.flagged},
                {e.rhombus_label, e.rhombus.value, e.rhombus.error_bar, e.rhombus.flagged});
    }
    stats.emit(r, opts.solver.tol);
    return r;
}

VerificationReport cmd_trapezium(const RunOptions& opts)
{
    const LevelRange levels = opts.range(kTrapeziumLevels);
    const Polygon p = trapezium_fixture();
    const auto meshes = nested_meshes(p, levels);
    const std::vector<std::pair<std::string, std::size_t>> cases{{"lambda1^sloped", kTrapeziumSloped},
                                                                 {"lambda1^top", kTrapeziumTop}};
    std::vector<std::vector<Spectrum>> seqs(cases.size());
    parallel_for(cases.size(), opts.threads, [&](std::size_t i) {
        seqs[i] = solve_sequence(meshes, BoundarySpec::dirichlet_on(4, {cases[i].second}), 1, opts.solver);
    });

    VerificationReport r;
    r.domain = "trapezium (-3,0), (3,0), (3,2), (0,2)";
    r.levels = level_list(levels);
    r.params = {{"sloped_length", p.side_length(kTrapeziumSloped)}, {"top_length", p.side_length(kTrapeziumTop)}};
    SweepStats stats;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        r.add(cases[i].first, estimate_index(seqs[i], 0));
        stats.sequence(cases[i].first, seqs[i], 0);
        stats.first_mode(cases[i].first, seqs[i].back().pairs[0]);
        const double v = r.operand(cases[i].first).value;
        r.property(cases[i].first + " positive", "> 0", fmt(v, 8), v > 0);
    }
    r.property("sloped side longer than top", "sqrt(13) > 3",
               fmt(p.side_length(kTrapeziumSloped), 8) + " vs " + fmt(p.side_length(kTrapeziumTop), 8),
               p.side_length(kTrapeziumSloped) > p.side_length(kTrapeziumTop));
    r.check("lambda1^sloped", Relation::Less, "lambda1^top");
    stats.emit(r, opts.solver.tol);
    return r;
}

VerificationReport cmd_bounds(const BoundsGrid& grid, const RunOptions& opts)
{
    const LevelRange tri_levels = opts.range(kTriangleLevels);
    const LevelRange rh_levels = opts.range(kRhombusLevels);
    VerificationReport r;
    r.domain = "explicit bounds";
    r.levels = level_list(tri_levels);

    struct BCell {
        double b;
        Estimate rhombus, mu2;
        SweepStats stats;
    };
    std::vector<BCell> bcells;
    for (double b : grid.b) bcells.push_back({b, {}, {}, {}});
    struct HCell {
        double h;
        Estimate obtuse;
        SweepStats stats;
    };
    std::vector<HCell> hcells;
    for (double h : grid.h) hcells.push_back({h, {}, {}});
    struct ACell {
        double alpha;
        Estimate obtuse, acute;
        CondRatio cond;
        SweepStats stats;
    };
    std::vector<ACell> acells;
    for (double a : grid.alpha) acells.push_back({a, {}, {}, {}, {}});

    auto mu2_of = [&](const Polygon& p, SweepStats& st, const std::string& name, FEFunction* mode = nullptr) {
        auto seq = solve_sequence(p, BoundarySpec::all_neumann(p.side_count()), tri_levels, 2, opts.solver);
        st.sequence(name, seq, 1);
        st.second_neumann(name, seq.back().pairs[1]);
        if (mode) *mode = seq.back().pairs[1].vector;
        return estimate_index(seq, 1);
    };

    const std::size_t jobs = bcells.size() + hcells.size() + acells.size();
    parallel_for(jobs, opts.threads, [&](std::size_t i) {
        if (i < bcells.size()) {
            BCell& c = bcells[i];
            const Triangle t = right_triangle(c.b);
            auto rh = solve_rhombus_sequence(t, rh_levels, false, 1, opts.solver);
            std::vector<Spectrum> seq;
            for (const auto& s : rh) seq.push_back(s.spectrum);
            c.stats.sequence("rhombus", seq, 0);
            c.stats.first_mode("rhombus", seq.back().pairs[0]);
            c.rhombus = estimate_index(seq, 0);
            c.mu2 = mu2_of(Polygon::from(t), c.stats, "triangle");
            return;
        }
        i -= bcells.size();
        if (i < hcells.size()) {
            hcells[i].obtuse = mu2_of(obtuse_isosceles(hcells[i].h), hcells[i].stats, "O");
            return;
        }
        i -= hcells.size();
        ACell& c = acells[i];
        const double h = h_from_alpha(c.alpha);
        c.obtuse = mu2_of(obtuse_isosceles(h), c.stats, "O");
        FEFunction mode;
        c.acute = mu2_of(acute_isosceles(h), c.stats, "A", &mode);
        c.cond = cond_ratio(*mode.mesh, mode, pi / 2 - c.alpha);
    });

    SweepStats stats;
    double worst_identity = 0.0;
    for (auto& c : bcells) {
        const std::string p = "b=" + fmt(c.b, 4) + "/";
        stats.merge(c.stats, p);
        const double hp = bound_hooker_protter(c.b), iso = bound_isosceles_upper(c.b);
        r.add(p + "lambda1(R)", c.rhombus);
        r.add(p + "mu2(T)", c.mu2);
        r.add(p + "HP", exact_estimate(hp));
        r.add(p + "isobound", exact_estimate(iso));
        const bool tie = c.b == 1.0;
        r.check(p + "HP", tie ? Relation::Equal : Relation::Less, p + "lambda1(R)");
        r.check(p + "mu2(T)", tie ? Relation::Equal : Relation::Less, p + "isobound");
        r.check(p + "isobound", tie ? Relation::Equal : Relation::Less, p + "HP");
        const double residual = std::abs(iso - hp - bound_gap(c.b));
        worst_identity = std::max(worst_identity, residual);
        r.property(p + "gap identity residual", "<= 1e-12", fmt(residual, 3), residual <= 1e-12);
        if (!tie) {
            const double q = bound_gap_quadratic(c.b);
            r.property(p + "gap quadratic negative", "< 0", fmt(q, 8), q < 0);
        }
    }
    // dense check of the identity, relative to the bound size since both grow like 1/b², and of the quadratic's sign
    int bad_sign = 0;
    double worst_relative = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double b = i / 1000.0;
        const double hp = bound_hooker_protter(b), iso = bound_isosceles_upper(b);
        worst_relative = std::max(worst_relative, std::abs(iso - hp - bound_gap(b)) / std::max(hp, std::abs(iso)));
        if (!(bound_gap_quadratic(b) < 0)) ++bad_sign;
    }
    r.property("gap identity on the b grid", "<= 1e-12", fmt(worst_identity, 3), worst_identity <= 1e-12);
    r.property("gap identity on a 999-point grid, relative", "<= 1e-12", fmt(worst_relative, 3),
               worst_relative <= 1e-12);
    r.property("gap quadratic negative on a 999-point grid", "0 nonnegative points", std::to_string(bad_sign),
               bad_sign == 0);

    for (auto& c : hcells) {
        const std::string p = "h=" + fmt(c.h, 4) + "/";
        stats.merge(c.stats, p);
        const auto [test, stated] = bound_obtuse_upper(c.h);
        r.add(p + "mu2(O)", c.obtuse);
        r.add(p + "obtuse test value", exact_estimate(test));
        r.add(p + "obtuse bound", exact_estimate(stated));
        r.check(p + "mu2(O)", Relation::Less, p + "obtuse test value");
        r.check(p + "obtuse test value", Relation::Less, p + "obtuse bound");
    }
    {
        const auto [test, stated] = bound_obtuse_upper(std::sqrt(0.5));
        r.property("obtuse bound components equal at h^2 = 1/2", "|difference| <= 1e-12",
                   fmt(std::abs(test - stated), 3), std::abs(test - stated) <= 1e-12);
    }

    for (auto& c : acells) {
        const std::string p = "alpha=" + fmt(c.alpha, 4) + "/";
        stats.merge(c.stats, p);
        r.add(p + "mu2(O)", c.obtuse);
        r.add(p + "mu2(A)", c.acute);
        r.check(p + "mu2(O)", Relation::Less, p + "mu2(A)");
        r.observe(p + "energy ratio " + fmt(c.cond.ratio, 8) + " against tan^2(beta) " +
                  fmt(std::pow(std::tan(pi / 2 - c.alpha), 2), 8) + ": condition " +
                  (c.cond.condition ? "holds" : "fails"));
    }
    stats.emit(r, opts.solver.tol);
    return r;
}

VerificationReport cmd_polygon_lb(const Polygon& polygon, std::size_t n, const RunOptions& opts,
                                  const std::string& name)
{
    const std::size_t sides = polygon.side_count();
    if (n < 1 || (sides != 2 * n + 1 && sides != 2 * n + 2))
        throw std::invalid_argument("polygon must have 2n+1 or 2n+2 sides");
    if (!polygon.is_convex()) throw std::invalid_argument("polygon must be convex");
    const LevelRange levels = opts.range(kPolygonLevels);
    const auto meshes = nested_meshes(polygon, levels);

    std::vector<std::vector<Spectrum>> seqs(sides + 1);
    parallel_for(sides + 1, opts.threads, [&](std::size_t i) {
        if (i == sides) {
            seqs[i] = solve_sequence(meshes, BoundarySpec::all_neumann(sides), 3, opts.solver);
            return;
        }
        std::vector<std::size_t> which;
        for (std::size_t j = 0; j < n; ++j) which.push_back((i + j) % sides);
        seqs[i] = solve_sequence(meshes, BoundarySpec::dirichlet_on(sides, which), 1, opts.solver);
    });

    VerificationReport r;
    r.domain = name + " with " + std::to_string(sides) + " sides, " + std::to_string(n) + " consecutive Dirichlet sides";
    r.params = {{"sides", static_cast<double>(sides)}, {"n", static_cast<double>(n)}};
    r.levels = level_list(levels);
    SweepStats stats;
    r.add("mu2", estimate_index(seqs[sides], 1));
    stats.sequence("mu", seqs[sides], 1);
    const auto clusters = degeneracy_clusters(seqs[sides].back());
    const bool mu2_simple = std::none_of(clusters.begin(), clusters.end(), [](const auto& c) {
        return c.size() > 1 && std::find(c.begin(), c.end(), std::size_t{1}) != c.end();
    });
    if (mu2_simple)
        stats.second_neumann("mu2", seqs[sides].back().pairs[1]);
    else
        r.observe("mu2 is multiple; its nodal count is basis dependent and not checked");

    std::string lowest;
    for (std::size_t i = 0; i < sides; ++i) {
        std::string label = "lambda1^D" + std::to_string(i);
        r.add(label, estimate_index(seqs[i], 0));
        stats.sequence(label, seqs[i], 0);
        stats.first_mode(label, seqs[i].back().pairs[0]);
        if (lowest.empty() || r.operand(label).value < r.operand(lowest).value) lowest = label;
        std::string sides_list;
        for (std::size_t j = 0; j < n; ++j) sides_list += (j ? "," : "") + std::to_string((i + j) % sides);
        r.observe(label + ": Dirichlet on sides " + sides_list);
    }
    r.check("min lambda1^D <= mu2", Relation::LessEqual, r.operand(lowest), r.operand("mu2"));
    stats.emit(r, opts.solver.tol);
    return r;
}

std::string cmd_plot(const PlotRequest& req, const SolverOptions& opts)
{
    if (req.mode < 1) throw std::invalid_argument("mode index is 1-based");
    std::shared_ptr<const Mesh> mesh;
    AssembledSystem sys;
    std::string title;
    if (req.domain == "rhombus") {
        const double two_alpha = req.param;
        if (!(two_alpha > 0) || two_alpha > pi / 2 + 1e-12) throw std::invalid_argument("2*alpha must lie in (0, pi/2]");
        const double b = std::abs(two_alpha - pi / 2) <= 1e-12 ? 1.0 : b_from_alpha(two_alpha / 2);
        auto srm = symmetric_rhombus_mesh(right_triangle(b), req.level);
        mesh = std::make_shared<const Mesh>(std::move(srm.mesh));
        BoundarySpec bc = BoundarySpec::dirichlet_on(4, req.dirichlet_sides);
        sys = assemble(mesh, bc);
        title = "rhombus 2alpha=" + fmt(two_alpha);
    } else {
        Polygon p = req.domain == "triangle"    ? Polygon::from(right_triangle(req.param))
                    : req.domain == "trapezium" ? trapezium_fixture()
                                                : throw std::invalid_argument("unknown plot domain '" + req.domain + "'");
        mesh = std::make_shared<const Mesh>(refine_to(triangulate(p), req.level));
        sys = assemble(mesh, BoundarySpec::dirichlet_on(p.side_count(), req.dirichlet_sides));
        title = req.domain;
    }
    const Spectrum spec = smallest_eigenpairs(sys, req.mode, opts);
    const auto& pair = spec.pairs.back();
    SvgOptions so;
    so.title = title + ", eigenvalue " + std::to_string(req.mode) + " = " + fmt(pair.value, 10);
    return render_svg(*mesh, pair.vector.values, so);
}

}  // namespace trispec
