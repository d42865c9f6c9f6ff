#pragma once

#include "trispec/eigensolver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trispec {

enum class Relation { Less, LessEqual, Equal };
enum class Status { Verified, Inconclusive, Violated };

std::string to_string(Relation r);
std::string to_string(Status s);
Relation relation_from_string(const std::string& s);
Status status_from_string(const std::string& s);

/// Rounds to 15 significant digits; every number stored in a report goes through this.
double round15(double x);

struct Operand {
    std::string label;
    double value = 0.0;
    double error_bar = 0.0;
    bool flagged = false;  // the estimate's sequence was not contracting

    friend bool operator==(const Operand&, const Operand&) = default;
};

struct InequalityCheck {
    std::string name;
    Relation relation = Relation::Less;
    Operand lhs;
    Operand rhs;
    double margin = 0.0;  // rhs − lhs
    Status status = Status::Inconclusive;

    friend bool operator==(const InequalityCheck&, const InequalityCheck&) = default;
};

/// Status of `lhs relation rhs` given both error bars. Strict relations need a
/// margin above three combined bars; equality needs |margin| within them. A
/// flagged operand makes every relation inconclusive.
Status evaluate_status(Relation r, const Operand& lhs, const Operand& rhs);

InequalityCheck make_check(std::string name, Relation r, Operand lhs, Operand rhs);

/// A yes/no property observed during a run (cluster sizes, nodal counts, ...).
struct PropertyCheck {
    std::string name;
    std::string expected;
    std::string observed;
    bool passed = false;

    friend bool operator==(const PropertyCheck&, const PropertyCheck&) = default;
};

struct TableEntry {
    std::string label;
    std::vector<double> per_level;
    double extrapolated = 0.0;
    double error_bar = 0.0;
    double observed_order = 0.0;
    bool flagged = false;

    friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct VerificationReport {
    std::string domain;
    std::vector<std::pair<std::string, double>> params;
    std::vector<int> levels;
    std::vector<TableEntry> table;
    std::vector<InequalityCheck> checks;
    std::vector<PropertyCheck> properties;
    std::vector<std::string> observations;

    friend bool operator==(const VerificationReport&, const VerificationReport&) = default;

    void add(const std::string& label, const Estimate& e);
    const TableEntry* find(const std::string& label) const;
    Operand operand(const std::string& label) const;

    /// Adds a check between two table labels; throws if either is missing.
    const InequalityCheck& check(const std::string& lhs, Relation r, const std::string& rhs);
    const InequalityCheck& check(std::string name, Relation r, Operand lhs, Operand rhs);
    void property(std::string name, std::string expected, std::string observed, bool passed);
    void observe(std::string text) { observations.push_back(std::move(text)); }

    /// Appends everything from `other`, prefixing its labels and check names.
    void merge(const VerificationReport& other, const std::string& prefix);

    std::size_t count(Status s) const;
    std::size_t failed_properties() const;
};

/// 0 when nothing is violated and no property failed; with `strict`,
/// inconclusive checks also fail.
int exit_code(const VerificationReport& r, bool strict);

std::string to_json(const VerificationReport& r);
VerificationReport from_json(const std::string& text);

/// Rows `label,level,value` per table entry and level, then
/// `label,extrapolated,value,error_bar` per entry.
std::string to_csv(const VerificationReport& r);

/// Human-readable summary: table, checks and properties.
void print_summary(std::ostream& out, const VerificationReport& r);

}  // namespace trispec
