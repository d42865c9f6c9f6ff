#include "trispec/commands.hpp"
#include "trispec/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

using namespace trispec;

namespace {

struct Common {
    int levels = 0;
    int base_level = -1;
    int k = 0;
    double tol = 1e-10;
    unsigned threads = 0;
    std::string out;
    std::string format = "json";
    bool strict = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--levels", c.levels, "number of refinement levels (at least 3)");
    cmd->add_option("--base-level", c.base_level, "coarsest refinement level");
    cmd->add_option("--k", c.k, "eigenpairs per solve");
    cmd->add_option("--tol", c.tol, "eigen residual tolerance");
    cmd->add_option("--threads", c.threads, "worker threads (0: all cores)");
    cmd->add_option("--out", c.out, "output file (default: stdout)");
    cmd->add_option("--format", c.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    cmd->add_flag("--strict", c.strict, "treat inconclusive checks as failures");
    cmd->add_flag("--quiet", c.quiet, "suppress the summary on stderr");
}

RunOptions run_options(const Common& c)
{
    RunOptions o;
    if (c.levels > 0) o.levels = c.levels;
    if (c.base_level >= 0) o.base_level = c.base_level;
    o.k = c.k;
    o.solver.tol = c.tol;
    o.threads = c.threads;
    return o;
}

void write(const Common& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + c.out);
    f << text;
}

int finish(const Common& c, const VerificationReport& r)
{
    if (c.format == "svg") throw std::invalid_argument("svg output is produced by the plot subcommand");
    write(c, c.format == "csv" ? to_csv(r) : to_json(r));
    if (!c.quiet) print_summary(std::cerr, r);
    const int code = exit_code(r, c.strict);
    if (code == 0 && r.count(Status::Inconclusive) > 0 && !c.quiet)
        std::cerr << "warning: inconclusive checks; re-run with more levels\n";
    return code;
}

Polygon named_polygon(const std::string& shape, double param)
{
    if (shape == "square") return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    if (shape == "pentagon") return regular_polygon(5);
    if (shape == "hexagon") return regular_polygon(6);
    if (shape == "triangle") return Polygon::from(right_triangle(param));
    if (shape == "regular") return regular_polygon(static_cast<std::size_t>(param));
    throw std::invalid_argument("unknown shape '" + shape + "'");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed Dirichlet-Neumann Laplace eigenvalues on polygons, with ordering and bound checks"};
    app.require_subcommand(1);
    Common common;

    double b = 0, alpha = 0;
    auto* order = app.add_subcommand("order", "ordering chain for a right triangle");
    auto* ob = order->add_option("--b", b, "leg ratio in (0, 1]");
    auto* oa = order->add_option("--alpha", alpha, "smallest angle in (0, pi/4]");
    ob->excludes(oa);
    add_common(order, common);

    ConjectureGrid grid;
    auto* conj = app.add_subcommand("conjecture", "scan of scalene triangles");
    conj->add_option("--nx", grid.nx, "grid points along x");
    conj->add_option("--ny", grid.ny, "grid points along the height");
    conj->add_option("--margin", grid.margin, "distance from the grid boundary");
    add_common(conj, common);

    double two_alpha = 1.4;
    int svg_mode = 2, svg_level = -1;
    bool svg_dirichlet = false;
    auto* rh = app.add_subcommand("rhombus", "rhombus modes and parity classes");
    rh->add_option("--two-alpha", two_alpha, "smallest rhombus angle");
    rh->add_option("--mode", svg_mode, "mode to draw with --format svg (1-based)");
    rh->add_flag("--dirichlet", svg_dirichlet, "draw the Dirichlet mode instead of the Neumann one");
    rh->add_option("--plot-level", svg_level, "mesh level for --format svg");
    add_common(rh, common);

    auto* trap = app.add_subcommand("trapezium", "Dirichlet on the sloped side against the top side");
    add_common(trap, common);

    BoundsGrid bgrid;
    auto* bounds = app.add_subcommand("bounds", "explicit upper and lower bounds");
    bounds->add_option("--b-grid", bgrid.b, "leg ratios");
    bounds->add_option("--h-grid", bgrid.h, "heights of the obtuse isosceles triangles");
    bounds->add_option("--alpha-grid", bgrid.alpha, "angles for the isosceles comparison");
    add_common(bounds, common);

    std::string shape = "square";
    double shape_param = 0.8;
    std::size_t n_consecutive = 1;
    auto* plb = app.add_subcommand("polygon-lb", "mu2 against consecutive-side Dirichlet problems");
    plb->add_option("--shape", shape, "square, pentagon, hexagon, triangle or regular");
    plb->add_option("--param", shape_param, "b for triangle, side count for regular");
    plb->add_option("-n,--n", n_consecutive, "consecutive Dirichlet sides");
    add_common(plb, common);

    PlotRequest plot;
    std::string plot_bc;
    auto* pl = app.add_subcommand("plot", "svg picture of an eigenfunction");
    pl->add_option("--domain", plot.domain, "rhombus, triangle or trapezium");
    pl->add_option("--param", plot.param, "2*alpha for rhombi, b for triangles");
    pl->add_option("--dirichlet-sides", plot.dirichlet_sides, "Dirichlet side indices");
    pl->add_option("--mode", plot.mode, "eigenvalue index (1-based)");
    pl->add_option("--level", plot.level, "refinement level");
    add_common(pl, common);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunOptions opts = run_options(common);
        if (*order) {
            if (*oa) b = b_from_alpha(alpha);
            if (!*ob && !*oa) throw std::invalid_argument("order needs --b or --alpha");
            return finish(common, cmd_order(b, opts));
        }
        if (*conj) return finish(common, cmd_conjecture(grid, opts));
        if (*rh) {
            if (common.format == "svg") {
                PlotRequest req;
                req.param = two_alpha;
                req.mode = svg_mode;
                req.level = svg_level >= 0 ? svg_level : 4;
                if (svg_dirichlet) req.dirichlet_sides = {0, 1, 2, 3};
                write(common, cmd_plot(req, opts.solver));
                return 0;
            }
            return finish(common, cmd_rhombus(two_alpha, opts));
        }
        if (*trap) return finish(common, cmd_trapezium(opts));
        if (*bounds) return finish(common, cmd_bounds(bgrid, opts));
        if (*plb) return finish(common, cmd_polygon_lb(named_polygon(shape, shape_param), n_consecutive, opts, shape));
        if (*pl) {
            if (common.format != "svg" && pl->count("--format") > 0)
                throw std::invalid_argument("plot only produces svg");
            write(common, cmd_plot(plot, opts.solver));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
