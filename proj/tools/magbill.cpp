#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magbill/algebra.hpp"
#include "magbill/boundary.hpp"
#include "magbill/dynamics.hpp"
#include "magbill/errors.hpp"
#include "magbill/geom.hpp"
#include "magbill/integrals.hpp"
#include "magbill/outer.hpp"
#include "magbill/poly.hpp"
#include "magbill/rng.hpp"
#include "../src/detail/format.hpp"

using namespace magbill;
using detail::fmt17;

namespace {

std::vector<double> parse_fields(const std::string& s, size_t n, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad number in ") + what + ": " + item);
        }
        while (used < item.size() && std::isspace((unsigned char)item[used])) ++used;
        if (used != item.size())
            throw std::invalid_argument(std::string("bad number in ") + what + ": " + item);
        out.push_back(v);
    }
    if (n != 0 && out.size() != n)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(n) +
                                    " comma-separated values");
    if (out.empty())
        throw std::invalid_argument(std::string(what) + " is empty");
    return out;
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    const char* env = std::getenv("MAGBILL_SEED");
    if (!env || !*env) return flag_seed;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0')
        throw std::invalid_argument("MAGBILL_SEED must be an unsigned integer");
    return (std::uint64_t)v;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

void require_admissible(const Boundary& b, const MagneticParams& params) {
    if (!params.admissible(b))
        throw std::invalid_argument("beta is not below the minimum boundary curvature");
}

BivarPoly load_integral_poly(const std::string& spec) {
    if (spec == "circle") {
        BivarPoly f;
        f.add_coeff(2, 0, 1.0);
        f.add_coeff(0, 2, 1.0);
        return f;
    }
    if (spec.rfind("file:", 0) == 0) return BivarPoly::read_file(spec.substr(5));
    throw std::invalid_argument("--integral must be 'circle' or 'file:PATH'");
}

struct SimulateOpts {
    std::string boundary;
    double beta = 0.0;
    std::string start;
    int steps = 1000;
    std::string out;
};

int cmd_simulate(const SimulateOpts& o) {
    auto b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    require_admissible(*b, params);
    auto sv = parse_fields(o.start, 3, "--start");
    LarmorState st{{sv[0], sv[1]}, {std::cos(sv[2]), std::sin(sv[2])}, params};
    auto recs = orbit(st, *b, o.steps);

    std::ostringstream os;
    os << "step,t_impact,qx,qy,vx_out,vy_out,cx_before,cy_before,cx_after,cy_after,"
          "arc_angle,integral_value\n";
    for (const auto& rec : recs) {
        if (!rec.ok) {
            std::cerr << "warning: orbit truncated at step " << rec.step << ": "
                      << rec.error << "\n";
            break;
        }
        os << rec.step << ',' << fmt17(rec.t_impact) << ',' << fmt17(rec.q.x) << ','
           << fmt17(rec.q.y) << ',' << fmt17(rec.v_out.x) << ',' << fmt17(rec.v_out.y)
           << ',' << fmt17(rec.center_before.x) << ',' << fmt17(rec.center_before.y)
           << ',' << fmt17(rec.center_after.x) << ',' << fmt17(rec.center_after.y)
           << ',' << fmt17(rec.arc_angle) << ',' << fmt17(rec.integral_value) << '\n';
    }
    write_text(o.out, os.str());
    return 0;
}

struct PortraitOpts {
    std::string boundary;
    double beta = 0.0;
    int seeds = 20;
    int iters = 500;
    std::uint64_t seed = 0;
    std::string out;
    std::string svg;
};

void write_portrait_svg(const std::string& path, const Boundary& b, double r,
                        const Portrait& portrait) {
    const auto& grid = b.scan_grid();
    double xmin = grid.p[0].x, xmax = grid.p[0].x;
    double ymin = grid.p[0].y, ymax = grid.p[0].y;
    for (const auto& p : grid.p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    xmin -= r;
    xmax += r;
    ymin -= r;
    ymax += r;
    double span = std::max(xmax - xmin, ymax - ymin);
    double pad = 0.02 * span;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
       << fmt17(xmin - pad) << ' ' << fmt17(-ymax - pad) << ' '
       << fmt17(xmax - xmin + 2 * pad) << ' ' << fmt17(ymax - ymin + 2 * pad)
       << "\">\n";

    auto polyline = [&](Side side, bool base) {
        os << "<polyline fill=\"none\" stroke=\"#999\" stroke-width=\""
           << fmt17(0.002 * span) << "\" points=\"";
        int n = (int)grid.t.size();
        for (int i = 0; i < n; ++i) {
            PlanarVector p = base ? grid.p[(size_t)i]
                                  : parallel_point(b, grid.t[(size_t)i], side, r);
            os << fmt17(p.x) << ',' << fmt17(-p.y);
            if (i + 1 < n) os << ' ';
        }
        os << "\"/>\n";
    };
    polyline(Side::plus, true);
    double kmin = b.min_curvature();
    if (r * kmin > 1.0 + 1e-9) polyline(Side::plus, false);
    polyline(Side::minus, false);

    int current = -1;
    for (const auto& pt : portrait.points) {
        if (pt.orbit_id != current) {
            if (current >= 0) os << "</g>\n";
            current = pt.orbit_id;
            os << "<g fill=\"hsl(" << (current * 137) % 360 << ",65%,40%)\">\n";
        }
        os << "<circle cx=\"" << fmt17(pt.c.x) << "\" cy=\"" << fmt17(-pt.c.y)
           << "\" r=\"" << fmt17(0.003 * span) << "\"/>\n";
    }
    if (current >= 0) os << "</g>\n";
    os << "</svg>\n";
    write_text(path, os.str());
}

int cmd_portrait(const PortraitOpts& o) {
    auto b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    require_admissible(*b, params);
    Portrait portrait = phase_portrait(*b, params, o.seeds, o.iters, effective_seed(o.seed));
    for (size_t i = 0; i < portrait.orbit_errors.size(); ++i) {
        if (!portrait.orbit_errors[i].empty())
            std::cerr << "warning: orbit " << i << ": " << portrait.orbit_errors[i] << "\n";
    }
    std::ostringstream os;
    os << "orbit_id,step,cx,cy,t_impact,tangential_velocity\n";
    for (const auto& pt : portrait.points) {
        os << pt.orbit_id << ',' << pt.step << ',' << fmt17(pt.c.x) << ','
           << fmt17(pt.c.y) << ',' << fmt17(pt.t_impact) << ','
           << fmt17(pt.tangential) << '\n';
    }
    write_text(o.out, os.str());
    if (!o.svg.empty()) write_portrait_svg(o.svg, *b, params.r, portrait);
    return 0;
}

struct CheckIntegralOpts {
    std::string boundary;
    double beta = 0.0;
    std::string integral = "circle";
    int samples = 1000;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string report;
};

int emit_report(const CheckReport& rep, const std::string& path) {
    write_text(path, check_report_json(rep) + "\n");
    return rep.pass ? 0 : 1;
}

int cmd_check_integral(const CheckIntegralOpts& o) {
    auto b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    BivarPoly F = load_integral_poly(o.integral);
    double mean = 0.0;
    double res = invariance_residual(F, *b, params, o.samples, effective_seed(o.seed), &mean);
    CheckReport rep;
    rep.check = "integral_invariance";
    rep.samples = o.samples;
    rep.mean = mean;
    rep.max_abs_residual = res;
    rep.tolerance = o.tol;
    rep.pass = res < o.tol;
    return emit_report(rep, o.report);
}

struct CheckRemarkableOpts {
    std::string boundary;
    double beta = 0.0;
    std::string poly;
    std::string side = "plus";
    int samples = 1024;
    double tol = 1e-9;
    std::string g;
    int k = 1;
    std::string report;
};

int cmd_check_remarkable(const CheckRemarkableOpts& o) {
    auto b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    BivarPoly F = BivarPoly::read_file(o.poly);
    Side side;
    if (o.side == "plus")
        side = Side::plus;
    else if (o.side == "minus")
        side = Side::minus;
    else
        throw std::invalid_argument("--side must be plus or minus");
    auto pts = parallel_samples(*b, params.r, side, o.samples);

    CheckReport rep;
    rep.samples = o.samples;
    rep.tolerance = o.tol;
    if (o.g.empty() && o.k == 1) {
        CurveStats st = rem3_residual(F, pts, params.beta);
        rep.check = "remarkable_rem3";
        rep.mean = st.mean;
        rep.max_abs_residual = st.max_dev;
    } else {
        BivarPoly g = o.g.empty() ? BivarPoly::constant(1.0) : BivarPoly::read_file(o.g);
        Rem5Stats st = rem5_residual(F, g, o.k, params.beta, pts);
        rep.check = "remarkable_rem5";
        rep.mean = st.mean;
        rep.max_abs_residual = st.max_dev;
    }
    double scale = std::max(1.0, std::abs(rep.mean));
    rep.pass = rep.max_abs_residual < o.tol * scale;
    return emit_report(rep, o.report);
}

struct CheckRem1Opts {
    std::string boundary;
    double beta = 0.0;
    std::string poly;
    double t = 0.0;
    std::string grazing_case = "a";
    std::string ladder = "1e-2,5e-3,2.5e-3";
    double tol = 1e-5;
    std::string report;
};

int cmd_check_rem1(const CheckRem1Opts& o) {
    auto b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    BivarPoly F = BivarPoly::read_file(o.poly);
    GrazingCase gc;
    if (o.grazing_case == "a")
        gc = GrazingCase::a;
    else if (o.grazing_case == "b")
        gc = GrazingCase::b;
    else
        throw std::invalid_argument("--case must be a or b");
    auto ladder = parse_fields(o.ladder, 0, "--eps-ladder");
    Rem1Result res = rem1_eps_check(F, *b, params, o.t, gc, ladder);
    CheckReport rep;
    rep.check = "rem1_eps3_ratio";
    rep.samples = (long long)ladder.size();
    rep.mean = res.ratio;
    rep.max_abs_residual = res.degenerate ? std::numeric_limits<double>::quiet_NaN()
                                          : std::abs(res.ratio - 1.0);
    rep.tolerance = o.tol;
    rep.pass = res.degenerate || std::abs(res.ratio - 1.0) < o.tol;
    return emit_report(rep, o.report);
}

struct CheckEquivalenceOpts {
    std::string boundary;
    double beta = 0.0;
    int samples = 500;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    std::string report;
};

int cmd_check_equivalence(const CheckEquivalenceOpts& o) {
    std::shared_ptr<const Boundary> b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    double mean = 0.0;
    double dev = equivalence_check(b, params, o.samples, effective_seed(o.seed), &mean);
    CheckReport rep;
    rep.check = "outer_equivalence";
    rep.samples = o.samples;
    rep.mean = mean;
    rep.max_abs_residual = dev;
    rep.tolerance = o.tol;
    rep.pass = dev < o.tol;
    return emit_report(rep, o.report);
}

struct OffsetOpts {
    double a = 0.0, b = 0.0, r = 0.0;
    std::string action;
    double x = 0.0, y = 0.0;
    bool have_r = false, have_x = false, have_y = false;
    int samples = 4096;
    double tol = 1e-6;
    double r_min = 0.0, r_max = 0.0;
    int r_steps = 0;
    std::uint64_t seed = 0;
    std::string report;
};

int cmd_offset(const OffsetOpts& o) {
    if (o.action == "scan") {
        if (o.r_steps <= 0) throw std::invalid_argument("--r-steps must be positive");
        std::vector<double> grid;
        for (int i = 0; i < o.r_steps; ++i) {
            grid.push_back(o.r_steps == 1
                               ? o.r_min
                               : o.r_min + (o.r_max - o.r_min) * i / (o.r_steps - 1));
        }
        auto entries = r_scan(o.a, o.b, grid);
        std::ostringstream os;
        os << '[';
        bool all = true;
        for (size_t i = 0; i < entries.size(); ++i) {
            if (i) os << ", ";
            os << "{\"r\": " << fmt17(entries[i].r)
               << ", \"certified\": " << (entries[i].certified ? "true" : "false")
               << ", \"detail\": \"" << entries[i].detail << "\"}";
            all = all && entries[i].certified;
        }
        os << "]\n";
        write_text(o.report, os.str());
        return all ? 0 : 1;
    }

    if (!o.have_r) throw std::invalid_argument("--r is required for this action");
    if (o.action == "eval") {
        if (!o.have_x || !o.have_y)
            throw std::invalid_argument("--action eval needs --x and --y");
        BivarPoly f = ellipse_offset_poly(o.a, o.b, o.r);
        write_text(o.report, fmt17(f.eval(o.x, o.y)) + "\n");
        return 0;
    }
    if (o.action == "vanish") {
        double res = offset_vanishing_check(o.a, o.b, o.r, o.samples);
        CheckReport rep;
        rep.check = "offset_vanishing";
        rep.samples = 2LL * o.samples;
        rep.mean = res;
        rep.max_abs_residual = res;
        rep.tolerance = o.tol;
        rep.pass = res < o.tol;
        return emit_report(rep, o.report);
    }
    if (o.action == "singular") {
        ObstructionReport rep = ellipse_obstruction_report(o.a, o.b, o.r, 0, o.seed);
        write_text(o.report, obstruction_report_json(rep) + "\n");
        return 0;
    }
    if (o.action == "infinity") {
        auto pts = infinity_report(ellipse_offset_poly(o.a, o.b, o.r));
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i) os << ", ";
            os << "{\"ratio\": ";
            if (pts[i].y_zero_direction)
                os << "null";
            else
                os << '[' << fmt17(pts[i].ratio.real()) << ", "
                   << fmt17(pts[i].ratio.imag()) << ']';
            os << ", \"multiplicity\": " << pts[i].multiplicity
               << ", \"isotropic\": " << (pts[i].isotropic ? "true" : "false")
               << ", \"tangency\": " << (pts[i].tangency ? "true" : "false") << '}';
        }
        os << "]\n";
        write_text(o.report, os.str());
        return 0;
    }
    throw std::invalid_argument("unknown --action " + o.action);
}

struct OuterOpts {
    std::string gamma;
    std::string orientation = "ccw";
    double r = 0.0;
    std::string start;
    int steps = 100;
    std::string out;
};

int cmd_outer(const OuterOpts& o) {
    std::shared_ptr<const Boundary> gamma = parse_boundary(o.gamma);
    Orientation orient;
    if (o.orientation == "ccw")
        orient = Orientation::counterclockwise;
    else if (o.orientation == "cw")
        orient = Orientation::clockwise;
    else
        throw std::invalid_argument("--orientation must be cw or ccw");
    OuterConfig config(gamma, orient, o.r);
    auto sv = parse_fields(o.start, 2, "--start");
    PlanarVector P{sv[0], sv[1]};

    std::ostringstream os;
    os << "step,px,py,s_tangency,ox,oy\n";
    for (int i = 0; i < o.steps; ++i) {
        OuterStep st;
        try {
            st = outer_step_full(P, config);
        } catch (const NoTangency& ex) {
            if (i == 0) throw;
            std::cerr << "warning: outer orbit truncated at step " << i << ": "
                      << ex.what() << "\n";
            break;
        }
        os << i << ',' << fmt17(P.x) << ',' << fmt17(P.y) << ','
           << fmt17(st.s_tangency) << ',' << fmt17(st.o.x) << ',' << fmt17(st.o.y)
           << '\n';
        P = st.next;
    }
    write_text(o.out, os.str());
    return 0;
}

struct LyapunovOpts {
    std::string boundary;
    double beta = 0.0;
    int iters = 10000;
    int starts = 50;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_lyapunov(const LyapunovOpts& o) {
    auto b = parse_boundary(o.boundary);
    MagneticParams params(o.beta);
    require_admissible(*b, params);
    SplitMix64 rng(effective_seed(o.seed));
    std::ostringstream os;
    os << "start_id,x0,y0,lambda,stderr,steps_used,complete\n";
    double lmax = -std::numeric_limits<double>::infinity();
    double lsum = 0.0;
    for (int s = 0; s < o.starts; ++s) {
        PlanarVector P = sample_phase_annulus(*b, params.r, 1e-3, rng);
        LyapunovResult res = lyapunov_estimate(P, *b, params, o.iters, rng.next_u64());
        os << s << ',' << fmt17(P.x) << ',' << fmt17(P.y) << ',' << fmt17(res.lambda)
           << ',' << fmt17(res.stderr_est) << ',' << res.steps_used << ','
           << (res.complete ? 1 : 0) << '\n';
        lmax = std::max(lmax, res.lambda);
        lsum += res.lambda;
    }
    if (!o.out.empty()) write_text(o.out, os.str());
    std::cout << "lambda_max " << fmt17(lmax) << "\n";
    std::cout << "lambda_mean " << fmt17(o.starts > 0 ? lsum / o.starts : 0.0) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar magnetic billiard simulator and verification toolkit"};
    app.require_subcommand(1);

    SimulateOpts sim;
    auto* sim_cmd = app.add_subcommand("simulate", "iterate the billiard flow from a unit tangent state");
    sim_cmd->add_option("--boundary", sim.boundary, "boundary spec")->required();
    sim_cmd->add_option("--beta", sim.beta, "field strength")->required();
    sim_cmd->add_option("--start", sim.start, "x,y,theta")->required();
    sim_cmd->add_option("--steps", sim.steps, "reflection count");
    sim_cmd->add_option("--out", sim.out, "CSV path (stdout when absent)");

    PortraitOpts por;
    auto* por_cmd = app.add_subcommand("portrait", "phase portrait of the center map");
    por_cmd->add_option("--boundary", por.boundary)->required();
    por_cmd->add_option("--beta", por.beta)->required();
    por_cmd->add_option("--seeds", por.seeds);
    por_cmd->add_option("--iters", por.iters);
    por_cmd->add_option("--seed", por.seed);
    por_cmd->add_option("--out", por.out);
    por_cmd->add_option("--svg", por.svg, "also write a static SVG");

    auto* check_cmd = app.add_subcommand("check", "numeric verification checks");
    check_cmd->require_subcommand(1);

    CheckIntegralOpts ci;
    auto* ci_cmd = check_cmd->add_subcommand("integral", "invariance of a candidate integral under the center map");
    ci_cmd->add_option("--boundary", ci.boundary)->required();
    ci_cmd->add_option("--beta", ci.beta)->required();
    ci_cmd->add_option("--integral", ci.integral, "circle | file:PATH");
    ci_cmd->add_option("--samples", ci.samples);
    ci_cmd->add_option("--seed", ci.seed);
    ci_cmd->add_option("--tol", ci.tol);
    ci_cmd->add_option("--report", ci.report, "JSON path (stdout when absent)");

    CheckRemarkableOpts cr;
    auto* cr_cmd = check_cmd->add_subcommand("remarkable", "constancy of H(F) + beta|grad F|^3 on a parallel curve");
    cr_cmd->add_option("--boundary", cr.boundary)->required();
    cr_cmd->add_option("--beta", cr.beta)->required();
    cr_cmd->add_option("--poly", cr.poly, "bivariate polynomial file")->required();
    cr_cmd->add_option("--side", cr.side, "plus | minus");
    cr_cmd->add_option("--samples", cr.samples);
    cr_cmd->add_option("--tol", cr.tol);
    cr_cmd->add_option("--g", cr.g, "cofactor polynomial file (switches to the power form)");
    cr_cmd->add_option("--k", cr.k, "power in the power form");
    cr_cmd->add_option("--report", cr.report);

    CheckRem1Opts c1;
    auto* c1_cmd = check_cmd->add_subcommand("rem1", "eps^3 coefficient of the grazing difference");
    c1_cmd->add_option("--boundary", c1.boundary)->required();
    c1_cmd->add_option("--beta", c1.beta)->required();
    c1_cmd->add_option("--poly", c1.poly)->required();
    c1_cmd->add_option("--t", c1.t, "boundary parameter of the base point");
    c1_cmd->add_option("--case", c1.grazing_case, "a | b");
    c1_cmd->add_option("--eps-ladder", c1.ladder, "comma-separated eps values");
    c1_cmd->add_option("--tol", c1.tol);
    c1_cmd->add_option("--report", c1.report);

    CheckEquivalenceOpts ce;
    auto* ce_cmd = check_cmd->add_subcommand("equivalence", "outer map on the inner parallel curve vs the center map");
    ce_cmd->add_option("--boundary,--gamma", ce.boundary)->required();
    ce_cmd->add_option("--beta", ce.beta)->required();
    ce_cmd->add_option("--samples", ce.samples);
    ce_cmd->add_option("--seed", ce.seed);
    ce_cmd->add_option("--tol", ce.tol);
    ce_cmd->add_option("--report", ce.report);

    OffsetOpts off;
    auto* off_cmd = app.add_subcommand("offset", "ellipse offset polynomial reports");
    off_cmd->add_option("--a", off.a)->required();
    off_cmd->add_option("--b", off.b)->required();
    auto* off_r = off_cmd->add_option("--r", off.r);
    off_cmd->add_option("--action", off.action, "eval | vanish | singular | infinity | scan")->required();
    auto* off_x = off_cmd->add_option("--x", off.x);
    auto* off_y = off_cmd->add_option("--y", off.y);
    off_cmd->add_option("--samples", off.samples);
    off_cmd->add_option("--tol", off.tol);
    off_cmd->add_option("--r-min", off.r_min);
    off_cmd->add_option("--r-max", off.r_max);
    off_cmd->add_option("--r-steps", off.r_steps);
    off_cmd->add_option("--seed", off.seed);
    off_cmd->add_option("--report", off.report);

    OuterOpts out;
    auto* out_cmd = app.add_subcommand("outer", "iterate the outer billiard about a curve");
    out_cmd->add_option("--gamma", out.gamma, "boundary spec")->required();
    out_cmd->add_option("--orientation", out.orientation, "cw | ccw");
    out_cmd->add_option("--r", out.r, "Larmor radius")->required();
    out_cmd->add_option("--start", out.start, "x,y")->required();
    out_cmd->add_option("--steps", out.steps);
    out_cmd->add_option("--out", out.out);

    LyapunovOpts ly;
    auto* ly_cmd = app.add_subcommand("lyapunov", "largest Lyapunov exponent of the center map");
    ly_cmd->add_option("--boundary", ly.boundary)->required();
    ly_cmd->add_option("--beta", ly.beta)->required();
    ly_cmd->add_option("--iters", ly.iters);
    ly_cmd->add_option("--starts", ly.starts);
    ly_cmd->add_option("--seed", ly.seed);
    ly_cmd->add_option("--out", ly.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sim_cmd->parsed()) return cmd_simulate(sim);
        if (por_cmd->parsed()) return cmd_portrait(por);
        if (ci_cmd->parsed()) return cmd_check_integral(ci);
        if (cr_cmd->parsed()) return cmd_check_remarkable(cr);
        if (c1_cmd->parsed()) return cmd_check_rem1(c1);
        if (ce_cmd->parsed()) return cmd_check_equivalence(ce);
        if (off_cmd->parsed()) {
            off.have_r = off_r->count() > 0;
            off.have_x = off_x->count() > 0;
            off.have_y = off_y->count() > 0;
            return cmd_offset(off);
        }
        if (out_cmd->parsed()) return cmd_outer(out);
        if (ly_cmd->parsed()) return cmd_lyapunov(ly);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
