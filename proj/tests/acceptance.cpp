// Acceptance gate: each criterion prints one pass/fail line with its measured
// value and runtime. Exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "magbill/algebra.hpp"
#include "magbill/boundary.hpp"
#include "magbill/dynamics.hpp"
#include "magbill/geom.hpp"
#include "magbill/integrals.hpp"
#include "magbill/outer.hpp"
#include "magbill/poly.hpp"
#include "magbill/rng.hpp"

using namespace magbill;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

int g_failures = 0;

void run_criterion(int id, const char* label, double budget_s,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = dt < budget_s;
    bool pass = ok && in_budget;
    if (!pass) ++g_failures;
    std::printf("criterion %2d %-4s %-28s %s time=%.2fs budget=%.0fs%s\n", id,
                pass ? "pass" : "FAIL", label, detail.c_str(), dt, budget_s,
                ok && !in_budget ? " (over budget)" : "");
    std::fflush(stdout);
}

BivarPoly random_poly(SplitMix64& rng, int deg) {
    BivarPoly p;
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j) p.add_coeff(i, j, rng.uniform(-1.0, 1.0));
    return p;
}

std::string fmtg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double integral_value(const LarmorState& st) {
    double r = st.params.r;
    return st.x.norm2() + 2.0 * r * (st.v.x * st.x.y - st.v.y * st.x.x);
}

}  // namespace

int main() {
    run_criterion(1, "energy drift, 1e5 steps", 2.0, [](std::string& detail) {
        CircleBoundary circ(2.0);
        MagneticParams params(1.0 / 3.0);
        LarmorState st{{-1.5, 0.0}, {0.0, -1.0}, params};
        double h0 = integral_value(st);
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            st = billiard_step(st, circ);
            worst = std::max(worst, std::abs(integral_value(st) - h0));
        }
        double rel = worst / std::abs(h0);
        detail = "rel_drift=" + fmtg(rel);
        return rel < 1e-8;
    });

    run_criterion(2, "rotation law, 1000 centers", 1.0, [](std::string& detail) {
        CircleBoundary circ(2.0);
        MagneticParams params(1.0 / 3.0);
        SplitMix64 rng(2026);
        double worst_rho = 0.0, worst_ang = 0.0;
        for (int i = 0; i < 1000; ++i) {
            double rho = rng.uniform(1.01, 4.99);
            double phi = rng.uniform(0.0, two_pi);
            PlanarVector P{rho * std::cos(phi), rho * std::sin(phi)};
            PlanarVector Q = center_map_M(P, circ, params);
            worst_rho = std::max(worst_rho, std::abs(Q.norm() - rho));
            double alpha = rotation_angle_circle(2.0, 3.0, rho);
            double dphi = Q.angle() - P.angle();
            double err = std::abs(std::polar(1.0, dphi) - std::polar(1.0, -alpha));
            worst_ang = std::max(worst_ang, err);
        }
        detail = "rho_err=" + fmtg(worst_rho) + " ang_err=" + fmtg(worst_ang);
        return worst_rho < 1e-10 && worst_ang < 1e-9;
    });

    run_criterion(3, "fixed boundary curves", 1.0, [](std::string& detail) {
        bool exact = rotation_angle_circle(2.0, 3.0, 5.0) == 0.0 &&
                     rotation_angle_circle(2.0, 3.0, 1.0) == 2.0 * std::acos(-1.0);
        CircleBoundary circ(2.0);
        MagneticParams pc(1.0 / 3.0);
        EllipseBoundary ell(2.0, 1.0);
        MagneticParams pe(0.2);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            double tc = circ.period() * i / 64.0;
            double te = ell.period() * i / 64.0;
            for (Side s : {Side::plus, Side::minus}) {
                PlanarVector p1 = parallel_point(circ, tc, s, pc.r);
                worst = std::max(worst, (center_map_M(p1, circ, pc) - p1).norm());
                PlanarVector p2 = parallel_point(ell, te, s, pe.r);
                worst = std::max(worst, (center_map_M(p2, ell, pe) - p2).norm());
            }
        }
        detail = "exact_endpoints=" + std::string(exact ? "yes" : "no") +
                 " max_move=" + fmtg(worst);
        return exact && worst < 1e-12;
    });

    run_criterion(4, "area preservation of M", 1.0, [](std::string& detail) {
        const double h = 3e-6;
        double worst = 0.0;
        auto probe = [&](const Boundary& b, const MagneticParams& params, std::uint64_t seed) {
            SplitMix64 rng(seed);
            int done = 0, attempts = 0;
            while (done < 100 && ++attempts < 5000) {
                PlanarVector P = sample_phase_annulus(b, params.r, 0.05, rng);
                try {
                    PlanarVector xp = center_map_M({P.x + h, P.y}, b, params);
                    PlanarVector xm = center_map_M({P.x - h, P.y}, b, params);
                    PlanarVector yp = center_map_M({P.x, P.y + h}, b, params);
                    PlanarVector ym = center_map_M({P.x, P.y - h}, b, params);
                    double det = ((xp.x - xm.x) * (yp.y - ym.y) -
                                  (yp.x - ym.x) * (xp.y - xm.y)) /
                                 (4.0 * h * h);
                    worst = std::max(worst, std::abs(det - 1.0));
                    ++done;
                } catch (const std::exception&) {
                }
            }
            return done == 100;
        };
        CircleBoundary circ(2.0);
        EllipseBoundary ell(2.0, 1.0);
        bool enough = probe(circ, MagneticParams(1.0 / 3.0), 41) &&
                      probe(ell, MagneticParams(0.2), 42);
        detail = "max|det-1|=" + fmtg(worst);
        return enough && worst < 1e-6;
    });

    run_criterion(5, "outer/center equivalence", 2.0, [](std::string& detail) {
        auto ell = std::make_shared<EllipseBoundary>(2.0, 1.0);
        double de = equivalence_check(ell, MagneticParams(0.2), 500, 51);
        auto circ = std::make_shared<CircleBoundary>(1.0);
        double dc = equivalence_check(circ, MagneticParams::from_radius(2.0), 500, 52);
        detail = "ellipse=" + fmtg(de) + " circle=" + fmtg(dc);
        return de < 1e-8 && dc < 1e-8;
    });

    run_criterion(6, "offset transcription gate", 1.0, [](std::string& detail) {
        double v1 = offset_vanishing_check(2.0, 1.0, 5.0, 4096);
        double v2 = offset_vanishing_check(3.0, 1.0, 10.0, 4096);
        detail = "r5=" + fmtg(v1) + " r10=" + fmtg(v2);
        return v1 < 1e-6 && v2 < 1e-6;
    });

    run_criterion(7, "complex singular points", 1.0, [](std::string& detail) {
        struct Set {
            double a, b, r;
        };
        double worst = 0.0;
        for (Set s : {Set{2, 1, 5}, Set{2, 1, 8}, Set{3, 2, 7}}) {
            auto pts = ellipse_offset_singular_points(s.a, s.b, s.r);
            if (pts.size() != 4) return false;
            BivarPoly f = ellipse_offset_poly(s.a, s.b, s.r);
            BivarPoly fx = f.derivative(0), fy = f.derivative(1);
            for (const ComplexPoint& p : pts) {
                double m = std::max(1.0, std::max(std::abs(p.x), std::abs(p.y)));
                double scale = f.max_abs_coeff() * std::pow(m, f.degree());
                double res = std::max({std::abs(f.eval(p.x, p.y)), std::abs(fx.eval(p.x, p.y)),
                                       std::abs(fy.eval(p.x, p.y))});
                worst = std::max(worst, res / scale);
            }
        }
        detail = "max_scaled_residual=" + fmtg(worst);
        return worst < 1e-6;
    });

    run_criterion(8, "obstruction verdicts", 5.0, [](std::string& detail) {
        ObstructionReport er = ellipse_obstruction_report(2.0, 1.0, 5.0, 2000, 8);
        BivarPoly circ;
        circ.add_coeff(2, 0, 1.0);
        circ.add_coeff(0, 2, 1.0);
        circ.add_coeff(0, 0, -9.0);
        ObstructionReport cr = obstruction_report(circ, 400, 8);
        BivarPoly eb;
        eb.add_coeff(2, 0, 0.25);
        eb.add_coeff(0, 2, 1.0);
        eb.add_coeff(0, 0, -1.0);
        ObstructionReport br = obstruction_report(eb, 400, 8);
        detail = verdict_name(er.verdict) + "/" + verdict_name(cr.verdict) + "/" +
                 verdict_name(br.verdict);
        return er.verdict == Verdict::obstructed_affine_singularity &&
               cr.verdict == Verdict::no_obstruction &&
               br.verdict == Verdict::obstructed_transversal_infinity;
    });

    run_criterion(9, "constant cubic combination", 1.0, [](std::string& detail) {
        CircleBoundary circ(2.0);
        BivarPoly F;
        F.add_coeff(2, 0, 1.0);
        F.add_coeff(0, 2, 1.0);
        F.add_coeff(0, 0, -9.0);
        BivarPoly one = BivarPoly::constant(1.0);
        auto inner = parallel_samples(circ, 3.0, Side::plus, 256);
        auto outer = parallel_samples(circ, 3.0, Side::minus, 256);
        CurveStats si = rem3_residual(F, inner, 1.0 / 3.0);
        CurveStats so = rem3_residual(F, outer, 1.0 / 3.0);
        Rem5Stats k1 = rem5_residual(F, one, 1, 1.0 / 3.0, inner);
        Rem5Stats k2 = rem5_residual(F, one, 2, 1.0 / 3.0, inner);
        double sq_err = std::abs(k2.mean - k1.mean * k1.mean);
        detail = "dev_in=" + fmtg(si.max_dev) + " dev_out=" + fmtg(so.max_dev);
        return si.max_dev < 1e-9 && so.max_dev < 1e-9 && k1.nonzero && k2.nonzero &&
               sq_err < 1e-9 * (1.0 + k1.mean * k1.mean) && k2.max_dev < 1e-6;
    });

    run_criterion(10, "derivative identity", 1.0, [](std::string& detail) {
        SplitMix64 rng(10);
        double worst = 0.0;
        int done = 0, attempts = 0;
        while (done < 100 && ++attempts < 2000) {
            BivarPoly F = random_poly(rng, 2 + static_cast<int>(rng.next_u64() % 4));
            PlanarVector p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            double beta = rng.uniform(0.05, 1.0);
            BivarPoly fx = F.derivative(0), fy = F.derivative(1);
            double gx = fx.eval(p), gy = fy.eval(p);
            double g = std::hypot(gx, gy);
            if (g < 1e-3) continue;
            BivarPoly Hf = H_operator(F);
            double hx = Hf.derivative(0).eval(p), hy = Hf.derivative(1).eval(p);
            double fxx = fx.derivative(0).eval(p), fxy = fx.derivative(1).eval(p),
                   fyy = fy.derivative(1).eval(p);
            double hvx = fxx * gx + fxy * gy, hvy = fxy * gx + fyy * gy;
            double lhs = hx * gy - hy * gx + 3.0 * beta * g * (hvx * gy - hvy * gx);
            double fxxx = fx.derivative(0).derivative(0).eval(p),
                   fxxy = fx.derivative(0).derivative(1).eval(p),
                   fxyy = fx.derivative(1).derivative(1).eval(p),
                   fyyy = fy.derivative(1).derivative(1).eval(p);
            double poly_part = fxxx * gy * gy * gy - 3.0 * fxxy * gy * gy * gx +
                               3.0 * fxyy * gy * gx * gx - fyyy * gx * gx * gx;
            double inner = fxx * gx * gy + fxy * (gy * gy - gx * gx) - fyy * gx * gy;
            double rhs = poly_part + 3.0 * beta * g * inner;
            double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
            ++done;
        }
        detail = "max_rel_err=" + fmtg(worst);
        return done == 100 && worst < 1e-8;
    });

    run_criterion(11, "eps^3 coefficient ratio", 1.0, [](std::string& detail) {
        CircleBoundary circ(2.0);
        MagneticParams params(1.0 / 3.0);
        std::vector<double> ladder{1e-2, 5e-3, 2.5e-3};
        SplitMix64 rng(11);
        double worst = 0.0;
        int done = 0, attempts = 0;
        while (done < 20 && ++attempts < 400) {
            BivarPoly F = random_poly(rng, 3 + static_cast<int>(rng.next_u64() % 3));
            double t = rng.uniform(0.0, two_pi);
            GrazingCase gc = (rng.next_u64() & 1) ? GrazingCase::a : GrazingCase::b;
            Rem1Result res;
            try {
                res = rem1_eps_check(F, circ, params, t, gc, ladder);
            } catch (const std::exception&) {
                continue;
            }
            if (res.degenerate || std::abs(res.predicted) < 1e-4) continue;
            worst = std::max(worst, std::abs(res.ratio - 1.0));
            ++done;
        }
        detail = "max|ratio-1|=" + fmtg(worst);
        return done == 20 && worst < 1e-5;
    });

    run_criterion(12, "band-limited restriction", 1.0, [](std::string& detail) {
        SplitMix64 rng(12);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            BivarPoly F = random_poly(rng, 4);
            PlanarVector c{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            double r = rng.uniform(0.3, 2.0);
            TrigPoly tp = fourier_restriction(F, c, r, 9);
            double scale = 1.0;
            for (int k = 0; k <= 9; ++k)
                scale = std::max({scale, std::abs(tp.A[k]), std::abs(tp.B[k])});
            for (int k = 5; k <= 9; ++k) {
                worst = std::max(worst, std::abs(tp.A[k]) / scale);
                worst = std::max(worst, std::abs(tp.B[k]) / scale);
            }
        }
        detail = "max_high_harmonic=" + fmtg(worst);
        return worst < 1e-10;
    });

    run_criterion(13, "invariance contrast", 2.0, [](std::string& detail) {
        EllipseBoundary ell(2.0, 1.0);
        BivarPoly off = ellipse_offset_poly(2.0, 1.0, 5.0);
        double big = invariance_residual(off, ell, MagneticParams(0.2), 300, 13);
        CircleBoundary circ(2.0);
        BivarPoly F;
        F.add_coeff(2, 0, 1.0);
        F.add_coeff(0, 2, 1.0);
        double small = invariance_residual(F, circ, MagneticParams(1.0 / 3.0), 300, 13);
        detail = "offset=" + fmtg(big) + " circle=" + fmtg(small);
        return big > 1e-3 && small < 1e-9;
    });

    run_criterion(14, "chaos contrast", 30.0, [](std::string& detail) {
        EllipseBoundary ell(2.0, 1.0);
        MagneticParams pe(0.2);
        SplitMix64 rng(14);
        double lmax = 0.0;
        for (int i = 0; i < 50; ++i) {
            PlanarVector P = sample_phase_annulus(ell, pe.r, 1e-3, rng);
            LyapunovResult lr = lyapunov_estimate(P, ell, pe, 10000, 1400 + i);
            if (lr.complete) lmax = std::max(lmax, lr.lambda);
        }
        CircleBoundary circ(2.0);
        MagneticParams pc(1.0 / 3.0);
        double cmax = 0.0;
        for (int i = 0; i < 5; ++i) {
            PlanarVector P = sample_phase_annulus(circ, pc.r, 1e-3, rng);
            LyapunovResult lr = lyapunov_estimate(P, circ, pc, 100000, 1450 + i);
            if (!lr.complete) return false;
            cmax = std::max(cmax, std::abs(lr.lambda));
        }
        detail = "ellipse_lmax=" + fmtg(lmax) + " circle_lmax=" + fmtg(cmax);
        return lmax > 0.01 && cmax < 1e-3;
    });

    run_criterion(15, "radius scan", 1.0, [](std::string& detail) {
        auto entries = r_scan(2.0, 1.0, {4.1, 4.5, 5.0, 6.0, 8.0});
        if (entries.size() != 5) return false;
        int ok = 0;
        for (const RScanEntry& e : entries)
            if (e.certified) ++ok;
        detail = "certified=" + std::to_string(ok) + "/5";
        return ok == 5;
    });

    if (g_failures == 0) std::printf("all 15 criteria passed\n");
    else std::printf("%d criteria FAILED\n", g_failures);
    return g_failures;
}
