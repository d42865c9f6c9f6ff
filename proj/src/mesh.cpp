#include "trispec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace trispec {

double Mesh::cell_area(std::size_t c) const
{
    const auto& t = cells.at(c);
    return 0.5 * cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
}

double Mesh::total_area() const
{
    double a = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) a += cell_area(c);
    return a;
}

double Mesh::min_signed_area() const
{
    double a = cells.empty() ? 0.0 : cell_area(0);
    for (std::size_t c = 1; c < cells.size(); ++c) a = std::min(a, cell_area(c));
    return a;
}

bool SymmetryMap::is_involution() const
{
    for (std::size_t v = 0; v < permutation.size(); ++v)
        if (permutation.at(permutation[v]) != v) return false;
    return true;
}

Mesh triangulate(const Polygon& p)
{
    if (!p.is_convex()) throw std::invalid_argument("triangulate: only convex polygons are supported");
    Mesh m;
    m.vertices = p.vertices();
    m.side_count = p.side_count();
    const std::size_t n = p.side_count();
    if (n == 3) {
        // an obtuse triangle is cut along its altitude: red refinement keeps right angles, never obtuse ones
        const auto& v = m.vertices;
        for (std::size_t i = 0; i < 3; ++i) {
            const Point2 u = v[(i + 1) % 3] - v[i], w = v[(i + 2) % 3] - v[i];
            if (u.x * w.x + u.y * w.y >= -1e-12 * (u.x * u.x + u.y * u.y + w.x * w.x + w.y * w.y)) continue;
            const std::size_t a = (i + 1) % 3, b = (i + 2) % 3;
            const Point2 d = v[b] - v[a], q = v[i] - v[a];
            const double s = (q.x * d.x + q.y * d.y) / (d.x * d.x + d.y * d.y);
            m.vertices.push_back(v[a] + s * d);
            m.cells = {{i, a, 3}, {i, 3, b}};
            for (std::size_t k = 0; k < 3; ++k) {
                if (k == a) {
                    m.boundary_edges.push_back({a, 3, k});
                    m.boundary_edges.push_back({3, b, k});
                } else {
                    m.boundary_edges.push_back({k, (k + 1) % 3, k});
                }
            }
            return m;
        }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) m.cells.push_back({0, i, i + 1});
    for (std::size_t i = 0; i < n; ++i) m.boundary_edges.push_back({i, (i + 1) % n, i});
    return m;
}

Mesh refine_uniform(const Mesh& m)
{
    Mesh out;
    out.vertices = m.vertices;
    out.side_count = m.side_count;
    out.level = m.level + 1;

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
    auto mid = [&](std::size_t a, std::size_t b) {
        auto key = std::minmax(a, b);
        auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, out.vertices.size());
        if (inserted) out.vertices.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
        return it->second;
    };

    out.cells.reserve(4 * m.cells.size());
    for (const auto& c : m.cells) {
        std::size_t ab = mid(c[0], c[1]), bc = mid(c[1], c[2]), ca = mid(c[2], c[0]);
        out.cells.push_back({c[0], ab, ca});
        out.cells.push_back({ab, c[1], bc});
        out.cells.push_back({ca, bc, c[2]});
        out.cells.push_back({ab, bc, ca});
    }
    out.boundary_edges.reserve(2 * m.boundary_edges.size());
    for (const auto& e : m.boundary_edges) {
        std::size_t x = mid(e.a, e.b);
        out.boundary_edges.push_back({e.a, x, e.side});
        out.boundary_edges.push_back({x, e.b, e.side});
    }
    return out;
}

Mesh refine_to(Mesh m, int level)
{
    if (level < m.level) throw std::invalid_argument("refine_to: mesh is already finer than requested");
    while (m.level < level) m = refine_uniform(m);
    return m;
}

namespace {

std::pair<double, double> coordinate_key(Point2 p)
{
    // -0.0 and 0.0 must collide
    return {p.x == 0.0 ? 0.0 : p.x, p.y == 0.0 ? 0.0 : p.y};
}

}  // namespace

SymmetryMap reflection_map(const Mesh& m, const Line& axis, double tol)
{
    std::map<std::pair<double, double>, std::size_t> index;
    for (std::size_t v = 0; v < m.vertices.size(); ++v) index.emplace(coordinate_key(m.vertices[v]), v);

    SymmetryMap map{axis, std::vector<std::size_t>(m.vertices.size())};
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        Point2 r = reflect(m.vertices[v], axis);
        auto it = index.find(coordinate_key(r));
        if (it == index.end()) {
            // fall back to a tolerance search for axes that are not coordinate lines
            auto best = m.vertices.size();
            double best_d = tol;
            for (std::size_t w = 0; w < m.vertices.size(); ++w) {
                double d = distance(m.vertices[w], r);
                if (d <= best_d) {
                    best = w;
                    best_d = d;
                }
            }
            if (best == m.vertices.size()) throw std::runtime_error("mesh is not symmetric about the requested axis");
            map.permutation[v] = best;
        } else {
            map.permutation[v] = it->second;
        }
    }
    return map;
}

SymmetricRhombusMesh symmetric_rhombus_mesh(const Triangle& t, int level)
{
    Rhombus rhombus = rhombus_from_right_triangle(t);
    const double a = rhombus.long_leg, c = rhombus.short_leg;
    Mesh quarter = refine_to(triangulate(Polygon({Point2{0, 0}, Point2{a, 0}, Point2{0, c}})), level);

    Mesh m;
    m.side_count = 4;
    m.level = level;
    std::map<std::pair<double, double>, std::size_t> index;
    auto vertex = [&](Point2 p) {
        auto [it, inserted] = index.try_emplace(coordinate_key(p), m.vertices.size());
        if (inserted) m.vertices.push_back(p);
        return it->second;
    };

    constexpr std::array<std::array<double, 2>, 4> quadrants{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
    for (std::size_t q = 0; q < 4; ++q) {
        const double sx = quadrants[q][0], sy = quadrants[q][1];
        std::vector<std::size_t> local(quarter.vertices.size());
        for (std::size_t v = 0; v < quarter.vertices.size(); ++v)
            local[v] = vertex({sx * quarter.vertices[v].x, sy * quarter.vertices[v].y});
        const bool flipped = sx * sy < 0;
        for (const auto& cell : quarter.cells) {
            Cell mapped{local[cell[0]], local[cell[1]], local[cell[2]]};
            if (flipped) std::swap(mapped[1], mapped[2]);
            m.cells.push_back(mapped);
        }
        for (const auto& e : quarter.boundary_edges) {
            if (e.side != 1) continue;  // the legs become interior diagonals
            BoundaryEdge be{local[e.a], local[e.b], q};
            if (flipped) std::swap(be.a, be.b);
            m.boundary_edges.push_back(be);
        }
    }

    SymmetricRhombusMesh out{std::move(m), rhombus, {}, {}};
    out.long_diagonal = reflection_map(out.mesh, rhombus.long_diagonal);
    out.short_diagonal = reflection_map(out.mesh, rhombus.short_diagonal);
    return out;
}

std::vector<std::size_t> compose(const std::vector<std::size_t>& first, const std::vector<std::size_t>& second)
{
    std::vector<std::size_t> out(first.size());
    for (std::size_t v = 0; v < first.size(); ++v) out[v] = second.at(first[v]);
    return out;
}

Mesh permute_vertices(const Mesh& m, const std::vector<std::size_t>& perm)
{
    if (perm.size() != m.vertices.size()) throw std::invalid_argument("permutation size mismatch");
    Mesh out = m;
    for (std::size_t v = 0; v < perm.size(); ++v) out.vertices.at(perm[v]) = m.vertices[v];
    for (auto& c : out.cells)
        for (auto& v : c) v = perm[v];
    for (auto& e : out.boundary_edges) {
        e.a = perm[e.a];
        e.b = perm[e.b];
    }
    return out;
}

std::vector<bool> boundary_vertices(const Mesh& m)
{
    std::vector<bool> on(m.vertices.size(), false);
    for (const auto& e : m.boundary_edges) on[e.a] = on[e.b] = true;
    return on;
}

void write_mesh(std::ostream& out, const Mesh& m)
{
    std::ostringstream s;
    s << std::setprecision(17);
    for (const auto& p : m.vertices) s << "v " << p.x << ' ' << p.y << '\n';
    for (const auto& c : m.cells) s << "c " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
    for (const auto& e : m.boundary_edges) s << "b " << e.a << ' ' << e.b << ' ' << e.side << '\n';
    out << s.str();
}

Mesh read_mesh(std::istream& in)
{
    Mesh m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream s(line);
        char tag = 0;
        s >> tag;
        bool ok = true;
        if (tag == 'v') {
            Point2 p;
            ok = static_cast<bool>(s >> p.x >> p.y);
            m.vertices.push_back(p);
        } else if (tag == 'c') {
            Cell c{};
            ok = static_cast<bool>(s >> c[0] >> c[1] >> c[2]);
            m.cells.push_back(c);
        } else if (tag == 'b') {
            BoundaryEdge e;
            ok = static_cast<bool>(s >> e.a >> e.b >> e.side);
            m.boundary_edges.push_back(e);
            m.side_count = std::max(m.side_count, e.side + 1);
        } else {
            ok = false;
        }
        if (!ok) throw std::runtime_error("malformed mesh line " + std::to_string(lineno));
    }
    for (const auto& c : m.cells)
        for (auto v : c)
            if (v >= m.vertices.size()) throw std::runtime_error("mesh cell references a missing vertex");
    return m;
}

}  // namespace trispec
