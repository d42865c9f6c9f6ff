#pragma once

#include "trispec/analysis.hpp"
#include "trispec/report.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace trispec {

struct RunOptions {
    std::optional<int> levels;      // number of refinement levels
    std::optional<int> base_level;  // coarsest level
    int k = 0;                      // eigenpairs per solve; 0 keeps the command default
    SolverOptions solver;
    unsigned threads = 0;  // 0: hardware concurrency

    LevelRange range(LevelRange fallback) const;
};

/// Default level ranges: triangles 2..6, rhombi/trapezium/polygons 2..5 or 3..6,
/// the conjecture scan 2..5.
inline constexpr LevelRange kTriangleLevels{2, 5};
inline constexpr LevelRange kRhombusLevels{2, 4};
inline constexpr LevelRange kTrapeziumLevels{3, 4};
inline constexpr LevelRange kPolygonLevels{2, 4};
inline constexpr LevelRange kScanLevels{2, 4};

/// Runs fn(0..n-1) on up to `threads` workers; the first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Table of μ₁, μ₂ and the seven λ₁^D of triangle `t` (labels mu1, mu2,
/// lambda1^S, ..., lambda1^LM, lambda1), with sweep properties recorded.
VerificationReport triangle_table(const Triangle& t, const RunOptions& opts, LevelRange fallback = kTriangleLevels);

/// Right triangle with legs 1 and b: the full ordering chain.
VerificationReport cmd_order(double b, const RunOptions& opts = {});

struct ConjectureGrid {
    int nx = 10;
    int ny = 10;
    double margin = 0.02;
};

/// Apex (x, y) of the scalene triangle (0,0), (1,0), (x, y) for grid cell (i, j).
Point2 conjecture_apex(const ConjectureGrid& g, int i, int j);

VerificationReport cmd_conjecture(const ConjectureGrid& grid, const RunOptions& opts = {});

/// Rhombus with smallest angle two_alpha.
VerificationReport cmd_rhombus(double two_alpha, const RunOptions& opts = {});

VerificationReport cmd_trapezium(const RunOptions& opts = {});

struct BoundsGrid {
    std::vector<double> b{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> h{0.3, 0.5, 0.6};
    std::vector<double> alpha{0.3, 0.5, 0.7};
};

VerificationReport cmd_bounds(const BoundsGrid& grid, const RunOptions& opts = {});

/// Convex polygon with 2n+1 or 2n+2 sides: μ₂ against every run of n
/// consecutive Dirichlet sides.
VerificationReport cmd_polygon_lb(const Polygon& polygon, std::size_t n, const RunOptions& opts = {},
                                  const std::string& name = "polygon");

struct PlotRequest {
    std::string domain = "rhombus";  // rhombus | triangle | trapezium
    double param = 1.4;              // 2α for rhombi, b for triangles
    std::vector<std::size_t> dirichlet_sides;
    int mode = 2;  // 1-based eigenvalue index
    int level = 4;
};

std::string cmd_plot(const PlotRequest& req, const SolverOptions& opts = {});

}  // namespace trispec
