#include "trispec/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trispec {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Relation r)
{
    switch (r) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    }
    return "?";
}

std::string to_string(Status s)
{
    switch (s) {
    case Status::Verified: return "verified";
    case Status::Inconclusive: return "inconclusive";
    case Status::Violated: return "violated";
    }
    return "?";
}

Relation relation_from_string(const std::string& s)
{
    if (s == "<") return Relation::Less;
    if (s == "<=") return Relation::LessEqual;
    if (s == "=") return Relation::Equal;
    throw std::invalid_argument("unknown relation '" + s + "'");
}

Status status_from_string(const std::string& s)
{
    if (s == "verified") return Status::Verified;
    if (s == "inconclusive") return Status::Inconclusive;
    if (s == "violated") return Status::Violated;
    throw std::invalid_argument("unknown status '" + s + "'");
}

double round15(double x)
{
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

Status evaluate_status(Relation r, const Operand& lhs, const Operand& rhs)
{
    const double margin = rhs.value - lhs.value;
    // the floor keeps exact ties between closed-form operands decidable
    const double bars = lhs.error_bar + rhs.error_bar + 1e-12 * std::max(std::abs(lhs.value), std::abs(rhs.value));
    const double band = 3.0 * bars;
    if (lhs.flagged || rhs.flagged) return Status::Inconclusive;
    switch (r) {
    case Relation::Less:
        if (margin > band) return Status::Verified;
        return margin < -band ? Status::Violated : Status::Inconclusive;
    case Relation::LessEqual: return margin < -band ? Status::Violated : Status::Verified;
    case Relation::Equal: return std::abs(margin) <= band ? Status::Verified : Status::Violated;
    }
    return Status::Inconclusive;
}

InequalityCheck make_check(std::string name, Relation r, Operand lhs, Operand rhs)
{
    lhs.value = round15(lhs.value);
    lhs.error_bar = round15(lhs.error_bar);
    rhs.value = round15(rhs.value);
    rhs.error_bar = round15(rhs.error_bar);
    InequalityCheck c{std::move(name), r, std::move(lhs), std::move(rhs), 0.0, Status::Inconclusive};
    c.margin = round15(c.rhs.value - c.lhs.value);
    c.status = evaluate_status(r, c.lhs, c.rhs);
    return c;
}

void VerificationReport::add(const std::string& label, const Estimate& e)
{
    if (find(label)) throw std::invalid_argument("duplicate table label '" + label + "'");
    TableEntry t;
    t.label = label;
    for (double v : e.per_level) t.per_level.push_back(round15(v));
    t.extrapolated = round15(e.value);
    t.error_bar = round15(e.error_bar);
    t.observed_order = round15(e.observed_order);
    t.flagged = e.flagged;
    table.push_back(std::move(t));
}

const TableEntry* VerificationReport::find(const std::string& label) const
{
    auto it = std::find_if(table.begin(), table.end(), [&](const TableEntry& t) { return t.label == label; });
    return it == table.end() ? nullptr : &*it;
}

Operand VerificationReport::operand(const std::string& label) const
{
    const TableEntry* t = find(label);
    if (!t) throw std::invalid_argument("no table entry '" + label + "'");
    return {label, t->extrapolated, t->error_bar, t->flagged};
}

const InequalityCheck& VerificationReport::check(const std::string& lhs, Relation r, const std::string& rhs)
{
    return check(lhs + " " + to_string(r) + " " + rhs, r, operand(lhs), operand(rhs));
}

const InequalityCheck& VerificationReport::check(std::string name, Relation r, Operand lhs, Operand rhs)
{
    checks.push_back(make_check(std::move(name), r, std::move(lhs), std::move(rhs)));
    return checks.back();
}

void VerificationReport::property(std::string name, std::string expected, std::string observed, bool passed)
{
    properties.push_back({std::move(name), std::move(expected), std::move(observed), passed});
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix)
{
    for (auto t : other.table) {
        t.label = prefix + t.label;
        if (find(t.label)) throw std::invalid_argument("duplicate table label '" + t.label + "'");
        table.push_back(std::move(t));
    }
    for (auto c : other.checks) {
        c.name = prefix + c.name;
        c.lhs.label = prefix + c.lhs.label;
        c.rhs.label = prefix + c.rhs.label;
        checks.push_back(std::move(c));
    }
    for (auto p : other.properties) {
        p.name = prefix + p.name;
        properties.push_back(std::move(p));
    }
    for (const auto& o : other.observations) observations.push_back(prefix + o);
}

std::size_t VerificationReport::count(Status s) const
{
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [&](const InequalityCheck& c) { return c.status == s; }));
}

std::size_t VerificationReport::failed_properties() const
{
    return static_cast<std::size_t>(
        std::count_if(properties.begin(), properties.end(), [](const PropertyCheck& p) { return !p.passed; }));
}

int exit_code(const VerificationReport& r, bool strict)
{
    if (r.count(Status::Violated) > 0 || r.failed_properties() > 0) return 1;
    if (strict && r.count(Status::Inconclusive) > 0) return 2;
    return 0;
}

namespace {

ordered_json number(double x)
{
    if (!std::isfinite(x)) return std::isnan(x) ? ordered_json("nan") : ordered_json(x > 0 ? "inf" : "-inf");
    return round15(x);
}

double read_number(const ordered_json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("bad number '" + s + "'");
    }
    return j.get<double>();
}

ordered_json operand_json(const Operand& o)
{
    return ordered_json{
        {"label", o.label}, {"value", number(o.value)}, {"error_bar", number(o.error_bar)}, {"flagged", o.flagged}};
}

Operand read_operand(const ordered_json& j)
{
    return {j.at("label").get<std::string>(), read_number(j.at("value")), read_number(j.at("error_bar")),
            j.value("flagged", false)};
}

}  // namespace

std::string to_json(const VerificationReport& r)
{
    ordered_json j;
    j["domain"] = r.domain;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : r.params) params[k] = number(v);
    j["params"] = params;
    j["levels"] = r.levels;
    ordered_json table = ordered_json::array();
    for (const auto& t : r.table) {
        ordered_json per = ordered_json::array();
        for (double v : t.per_level) per.push_back(number(v));
        table.push_back(ordered_json{{"label", t.label},
                                     {"per_level", per},
                                     {"extrapolated", number(t.extrapolated)},
                                     {"error_bar", number(t.error_bar)},
                                     {"observed_order", number(t.observed_order)},
                                     {"flagged", t.flagged}});
    }
    j["table"] = table;
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back(ordered_json{{"name", c.name},
                                      {"relation", to_string(c.relation)},
                                      {"lhs", operand_json(c.lhs)},
                                      {"rhs", operand_json(c.rhs)},
                                      {"margin", number(c.margin)},
                                      {"status", to_string(c.status)}});
    j["checks"] = checks;
    ordered_json props = ordered_json::array();
    for (const auto& p : r.properties)
        props.push_back(ordered_json{{"name", p.name},
                                     {"expected", p.expected},
                                     {"observed", p.observed},
                                     {"status", p.passed ? "pass" : "fail"}});
    j["properties"] = props;
    j["observations"] = r.observations;
    return j.dump(2) + "\n";
}

VerificationReport from_json(const std::string& text)
{
    const ordered_json j = ordered_json::parse(text);
    VerificationReport r;
    r.domain = j.at("domain").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, read_number(v));
    r.levels = j.at("levels").get<std::vector<int>>();
    for (const auto& t : j.at("table")) {
        TableEntry e;
        e.label = t.at("label").get<std::string>();
        for (const auto& v : t.at("per_level")) e.per_level.push_back(read_number(v));
        e.extrapolated = read_number(t.at("extrapolated"));
        e.error_bar = read_number(t.at("error_bar"));
        e.observed_order = read_number(t.at("observed_order"));
        e.flagged = t.value("flagged", false);
        r.table.push_back(std::move(e));
    }
    for (const auto& c : j.at("checks")) {
        InequalityCheck k;
        k.name = c.at("name").get<std::string>();
        k.relation = relation_from_string(c.at("relation").get<std::string>());
        k.lhs = read_operand(c.at("lhs"));
        k.rhs = read_operand(c.at("rhs"));
        k.margin = read_number(c.at("margin"));
        k.status = status_from_string(c.at("status").get<std::string>());
        r.checks.push_back(std::move(k));
    }
    if (j.contains("properties"))
        for (const auto& p : j.at("properties"))
            r.properties.push_back({p.at("name").get<std::string>(), p.at("expected").get<std::string>(),
                                    p.at("observed").get<std::string>(), p.at("status").get<std::string>() == "pass"});
    if (j.contains("observations")) r.observations = j.at("observations").get<std::vector<std::string>>();
    return r;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

}  // namespace

std::string to_csv(const VerificationReport& r)
{
    std::ostringstream os;
    os << "label,level,value\n";
    for (const auto& t : r.table)
        for (std::size_t i = 0; i < t.per_level.size(); ++i) {
            const int level = i < r.levels.size() ? r.levels[i] : static_cast<int>(i);
            os << csv_field(t.label) << ',' << level << ',' << fmt(t.per_level[i]) << '\n';
        }
    for (const auto& t : r.table)
        os << csv_field(t.label) << ",extrapolated," << fmt(t.extrapolated) << ',' << fmt(t.error_bar) << '\n';
    return os.str();
}

void print_summary(std::ostream& out, const VerificationReport& r)
{
    out << r.domain << "\n";
    for (const auto& [k, v] : r.params) out << "  " << k << " = " << fmt(v) << "\n";
    if (!r.table.empty()) {
        out << "\n  " << std::left << std::setw(28) << "label" << std::setw(20) << "value" << std::setw(12) << "bar"
            << "order\n";
        for (const auto& t : r.table)
            out << "  " << std::setw(28) << t.label << std::setw(20) << fmt(t.extrapolated) << std::setw(12)
                << std::setprecision(3) << t.error_bar << std::setprecision(3) << t.observed_order
                << (t.flagged ? "  (flagged)" : "") << "\n";
    }
    if (!r.checks.empty()) {
        out << "\n";
        for (const auto& c : r.checks)
            out << "  [" << std::setw(12) << to_string(c.status) << "] " << c.name << "  margin " << std::setprecision(4)
                << c.margin << "\n";
    }
    if (!r.properties.empty()) {
        out << "\n";
        for (const auto& p : r.properties)
            out << "  [" << (p.passed ? "pass" : "FAIL") << "] " << p.name << ": expected " << p.expected
                << ", observed " << p.observed << "\n";
    }
    for (const auto& o : r.observations) out << "  note: " << o << "\n";
    out << "\n  " << r.count(Status::Verified) << " verified, " << r.count(Status::Inconclusive) << " inconclusive, "
        << r.count(Status::Violated) << " violated, " << r.failed_properties() << " failed properties\n";
    out << std::right;
}

}  // namespace trispec
