#include "trispec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace trispec {

namespace {

// diverging blue-white-red map on t in [-1, 1]
std::string colour(double t)
{
    t = std::clamp(t, -1.0, 1.0);
    const double s = std::abs(t);
    int r, g, b;
    if (t < 0) {
        r = static_cast<int>(255 * (1 - 0.85 * s));
        g = static_cast<int>(255 * (1 - 0.6 * s));
        b = 255;
    } else {
        r = 255;
        g = static_cast<int>(255 * (1 - 0.7 * s));
        b = static_cast<int>(255 * (1 - 0.85 * s));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

}  // namespace

std::string render_svg(const Mesh& m, const Eigen::VectorXd& values, const SvgOptions& opts)
{
    if (static_cast<std::size_t>(values.size()) != m.vertices.size())
        throw std::invalid_argument("function size does not match the mesh");
    if (m.vertices.empty()) throw std::invalid_argument("empty mesh");

    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const auto& p : m.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double pad = 10;
    const double scale = (opts.width - 2 * pad) / std::max(xmax - xmin, 1e-300);
    const double height = (ymax - ymin) * scale + 2 * pad;
    auto X = [&](const Point2& p) { return pad + (p.x - xmin) * scale; };
    auto Y = [&](const Point2& p) { return height - pad - (p.y - ymin) * scale; };

    const double peak = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    const int bands = std::max(opts.bands, 2);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << opts.width << ' ' << num(height) << "\">\n";
    if (!opts.title.empty()) os << "<title>" << opts.title << "</title>\n";

    os << "<g stroke-width=\"0.3\">\n";
    for (const auto& c : m.cells) {
        double mean = 0;
        for (auto v : c) mean += values[static_cast<Eigen::Index>(v)];
        mean /= 3 * peak;
        // quantise so equal bands share a colour
        const double band = (std::floor((mean + 1) / 2 * bands) + 0.5) / bands * 2 - 1;
        const std::string col = colour(band);
        os << "<polygon points=\"";
        for (auto v : c) os << num(X(m.vertices[v])) << ',' << num(Y(m.vertices[v])) << ' ';
        os << "\" fill=\"" << col << "\" stroke=\"" << col << "\"/>\n";
    }
    os << "</g>\n";

    // zero set: linear interpolation along sign-changing edges of each cell
    const double eps = opts.eps_rel * peak;
    os << "<g stroke=\"#000000\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (const auto& c : m.cells) {
        Point2 hits[3];
        int n = 0;
        for (int e = 0; e < 3; ++e) {
            const auto a = c[e], b = c[(e + 1) % 3];
            const double ua = values[static_cast<Eigen::Index>(a)], ub = values[static_cast<Eigen::Index>(b)];
            if ((ua > eps && ub < -eps) || (ua < -eps && ub > eps)) {
                const double s = ua / (ua - ub);
                hits[n++] = m.vertices[a] + s * (m.vertices[b] - m.vertices[a]);
            }
        }
        if (n == 2)
            os << "<line x1=\"" << num(X(hits[0])) << "\" y1=\"" << num(Y(hits[0])) << "\" x2=\"" << num(X(hits[1]))
               << "\" y2=\"" << num(Y(hits[1])) << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g stroke=\"#333333\" stroke-width=\"2\">\n";
    for (const auto& e : m.boundary_edges)
        os << "<line x1=\"" << num(X(m.vertices[e.a])) << "\" y1=\"" << num(Y(m.vertices[e.a])) << "\" x2=\""
           << num(X(m.vertices[e.b])) << "\" y2=\"" << num(Y(m.vertices[e.b])) << "\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace trispec
