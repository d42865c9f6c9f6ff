#pragma once

#include "trispec/eigensolver.hpp"
#include "trispec/fem.hpp"
#include "trispec/mesh.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trispec {

// ---------------------------------------------------------------------------
// Closed-form spectra
// ---------------------------------------------------------------------------

enum class DomainKind { RightIsosceles, Equilateral, HalfEquilateral, Interval };

std::string to_string(DomainKind kind);

/// Sorted eigenvalues (with multiplicity) of a domain whose spectrum is known
/// in closed form.
///
/// Side indexing of `bc` follows the canonical placements used elsewhere:
///  - RightIsosceles: right_triangle(1) scaled by `size` (leg length);
///    side 0 = x-axis leg, 1 = hypotenuse, 2 = y-axis leg.
///  - HalfEquilateral: right_triangle(1/√3) scaled to hypotenuse `size`;
///    side 0 = long leg M, 1 = hypotenuse L, 2 = short leg S.
///  - Equilateral: side length `size`; all-Neumann or all-Dirichlet only.
///  - Interval: [0, size]; bc[0] and bc[1] are the two end points.
struct ClosedFormSpectrum {
    DomainKind kind = DomainKind::Interval;
    BoundarySpec bc;
    double size = 1.0;
    std::vector<double> values;
};

class UnsupportedClosedForm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ClosedFormSpectrum closed_form(DomainKind kind, const BoundarySpec& bc, std::size_t count, double size = 1.0);

// ---------------------------------------------------------------------------
// Explicit bounds for the right triangle (0,0), (1,0), (0,b)
// ---------------------------------------------------------------------------

/// Lower bound π²(1+b)²/(4b²) for the first Dirichlet eigenvalue of the
/// rhombus built from four copies of the triangle.
double bound_hooker_protter(double b);

/// Upper bound on μ₂ of the triangle from the deformed-eigenfunction test function.
double bound_isosceles_upper(double b);

/// Closed form of bound_isosceles_upper(b) − bound_hooker_protter(b).
double bound_gap(double b);

/// The quadratic 9π²b² − (256+6π²)b + 21π² − 256 that fixes the sign of the gap.
double bound_gap_quadratic(double b);

/// Obtuse isosceles O(β) with h = cos β: (test-function value, stated bound)
/// = ((π² + 16h² − 8)/(4h²(1−h²)), π²/(4h²(1−h²))).
std::pair<double, double> bound_obtuse_upper(double h);

/// Test function φ₁(x, y/b) − (1−b)φ₂(x, y/b) on the right triangle with legs 1, b.
double isobound_test_function(double b, Point2 p);

/// Deformed right-isosceles mode sin(πx'/2)cos(πy'/2), x' = x/√(1−h²), y' = y/h.
double obtuse_test_function(double h, Point2 p);

// ---------------------------------------------------------------------------
// Eigenfunction diagnostics
// ---------------------------------------------------------------------------

struct CondRatio {
    double ratio = 0.0;    // ∫u_y² / ∫u_x², +inf when the x-energy vanishes
    bool condition = false;  // ratio > tan²β
};

/// Energy ratio of u on the acute isosceles A(α) against tan²β.
CondRatio cond_ratio(const Mesh& m, const FEFunction& u, double beta);

class NumericallyZero : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Connected components of {u > ε} and {u < −ε}, ε = eps_rel·max|u|, under
/// mesh-edge adjacency.
int nodal_domain_count(const Mesh& m, const FEFunction& u, double eps_rel = 1e-3);

// ---------------------------------------------------------------------------
// Rhombus symmetry classes
// ---------------------------------------------------------------------------

/// Parity class of a rhombus mode. The first letter refers to the long
/// diagonal, the second to the short one (S symmetric, A antisymmetric), so
/// SA is even across the long diagonal and odd across the short diagonal.
enum class SymClass { SS, SA, AS, AA };
inline constexpr std::array<SymClass, 4> kAllClasses{SymClass::SS, SymClass::SA, SymClass::AS, SymClass::AA};

std::string to_string(SymClass c);

struct ModeSymmetry {
    /// "SS", "SA", "AS", "AA" or "degenerate-cluster"
    std::string label;
    /// uᵀM(u∘σ) per diagonal; for clusters the mean over the cluster
    double long_score = 0.0;
    double short_score = 0.0;
    /// dimension of each class (indexed like kAllClasses) inside the mode's eigenspace
    std::array<int, 4> dims{};

    bool has(SymClass c) const { return dims[static_cast<std::size_t>(c)] > 0; }
};

class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Classifies a single M-normalised mode on a symmetric rhombus mesh.
ModeSymmetry symmetry_class(const AssembledSystem& sys, const FEFunction& u, const SymmetryMap& long_diagonal,
                            const SymmetryMap& short_diagonal);

/// Classifies the invariant subspace spanned by an M-orthonormal cluster by
/// projecting onto the four parity classes.
ModeSymmetry cluster_symmetry(const AssembledSystem& sys, const std::vector<FEFunction>& cluster,
                              const SymmetryMap& long_diagonal, const SymmetryMap& short_diagonal);

/// Class of every eigenpair in `spec`; cluster members share their cluster's result.
std::vector<ModeSymmetry> classify_spectrum(const AssembledSystem& sys, const Spectrum& spec,
                                            const SymmetryMap& long_diagonal, const SymmetryMap& short_diagonal,
                                            double rel_gap = 1e-6);

// ---------------------------------------------------------------------------
// Triangle ↔ rhombus matching
// ---------------------------------------------------------------------------

struct MatchEntry {
    std::string triangle_label;  // e.g. "lambda1^S"
    std::string rhombus_label;   // e.g. "Neumann SA"
    Estimate triangle;
    Estimate rhombus;
    double difference = 0.0;
    double combined_bar = 0.0;
    bool found = false;  // rhombus class present among the computed modes
    bool matched = false;
};

struct MatchingReport {
    double b = 0.0;
    std::vector<MatchEntry> entries;
    bool all_matched() const;
};

/// One rhombus solve: the symmetric mesh, its system, the spectrum and the
/// parity class of every computed mode.
struct RhombusSolve {
    std::shared_ptr<const Mesh> mesh;
    SymmetryMap long_diagonal;
    SymmetryMap short_diagonal;
    AssembledSystem system;
    Spectrum spectrum;
    std::vector<ModeSymmetry> classes;
};

/// Rhombus built from right triangle `t`, all-Neumann (`neumann`) or all-Dirichlet.
RhombusSolve solve_rhombus(const Triangle& t, int level, bool neumann, int k, const SolverOptions& opts = {});
std::vector<RhombusSolve> solve_rhombus_sequence(const Triangle& t, LevelRange levels, bool neumann, int k,
                                                 const SolverOptions& opts = {});

/// Lowest eigenvalue of `cls` at every level (NaN where absent). For Neumann
/// problems the constant mode is skipped.
std::vector<double> class_values(const std::vector<RhombusSolve>& seq, SymClass cls);

/// Solves the mixed problems on `t` and the Neumann/Dirichlet problems on the
/// rhombus built from it, and pairs each mixed eigenvalue with the lowest
/// rhombus eigenvalue of the matching parity class.
MatchingReport triangle_to_rhombus_matching(const Triangle& t, LevelRange levels, int neumann_modes = 8,
                                            int dirichlet_modes = 4, const SolverOptions& opts = {});

/// Same, reusing rhombus solves over the same level range.
MatchingReport triangle_to_rhombus_matching(const Triangle& t, LevelRange levels,
                                            const std::vector<RhombusSolve>& neumann,
                                            const std::vector<RhombusSolve>& dirichlet, const SolverOptions& opts = {});

}  // namespace trispec
