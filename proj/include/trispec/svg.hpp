#pragma once

#include "trispec/mesh.hpp"

#include <Eigen/Core>
#include <string>

namespace trispec {

struct SvgOptions {
    int width = 480;     // pixels; the height follows the aspect ratio
    int bands = 12;      // colour bands between −max|u| and max|u|
    double eps_rel = 1e-3;
    std::string title;
};

/// Filled band plot of the piecewise-linear function `values` on `m`, with
/// its zero level set and the domain outline drawn on top.
std::string render_svg(const Mesh& m, const Eigen::VectorXd& values, const SvgOptions& opts = {});

}  // namespace trispec
