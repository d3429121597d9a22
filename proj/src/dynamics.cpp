#include "magbill/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magbill/errors.hpp"
#include "detail/rootfind.hpp"

namespace magbill {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double grazing_tol = 1e-9;
constexpr double boundary_guard = 1e-9;

double wrap_positive(double angle) {
    double w = std::fmod(angle, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

struct CircleCrossing {
    double t;
    PlanarVector q;
    double exit_dot;  // <circle velocity at q, outward normal>
};

struct CrossingScan {
    std::vector<CircleCrossing> crossings;
    bool on_parallel_curve = false;  // P within the guard of either parallel curve
    bool empty = false;              // circle misses the boundary entirely
};

// Finds all parameters with |eval(t) - c| = r and classifies each crossing by
// the sign of the outward component of the counterclockwise circle velocity.
// Also detects tangency of the distance function (center sitting on a parallel
// curve), where the crossing degenerates.
CrossingScan scan_circle_crossings(const Boundary& b, const PlanarVector& c, double r) {
    const Boundary::ScanGrid& g = b.scan_grid();
    const int n = Boundary::scan_intervals;
    const double r2 = r * r;

    std::vector<double> s(n + 1);
    int imin = 0, imax = 0;
    for (int i = 0; i <= n; ++i) {
        s[i] = (g.p[i] - c).norm2() - r2;
        if (s[i] < s[imin]) imin = i;
        if (s[i] > s[imax]) imax = i;
    }

    auto f = [&](double t) { return (b.eval(t) - c).norm2() - r2; };
    const double T = b.period();

    CrossingScan out;

    // Proximity of P to a parallel curve shows up as the min or max of
    // |eval(t)-c| sitting within the guard of r.  Only refine when the grid
    // value is close enough for that to be possible.
    double cell = T / n;
    double band = 2.0 * r * (g.max_chord + 1e-6);  // bound on grid-vs-true extremum gap, squared scale

    if (std::abs(s[imin]) < band) {
        double lo = g.t[std::max(imin - 1, 0)];
        double hi = g.t[std::min(imin + 1, n)];
        if (imin == 0) lo = g.t[0] - cell;
        if (imin == n) hi = g.t[n] + cell;
        auto [tm, sm] = detail::golden_min(f, lo, hi, T * 1e-9);
        (void)tm;
        double dmin = std::sqrt(std::max(sm + r2, 0.0));
        if (std::abs(dmin - r) < boundary_guard) {
            out.on_parallel_curve = true;
            return out;
        }
    }
    if (std::abs(s[imax]) < band) {
        double lo = g.t[std::max(imax - 1, 0)];
        double hi = g.t[std::min(imax + 1, n)];
        if (imax == 0) lo = g.t[0] - cell;
        if (imax == n) hi = g.t[n] + cell;
        auto [tm, sm] = detail::golden_min([&](double t) { return -f(t); }, lo, hi, T * 1e-9);
        (void)tm;
        double dmax = std::sqrt(std::max(r2 - sm, 0.0));
        if (std::abs(dmax - r) < boundary_guard) {
            out.on_parallel_curve = true;
            return out;
        }
    }

    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        if (s[i] == 0.0) {
            roots.push_back(g.t[i]);
        } else if ((s[i] < 0.0) != (s[i + 1] < 0.0)) {
            roots.push_back(detail::refine_root(f, g.t[i], g.t[i + 1], s[i], s[i + 1], 1e-12));
        }
    }

    if (roots.empty()) {
        // A pair of crossings inside one cell escapes the node scan; recover
        // them from the refined extremum if it dips through zero.
        int iext = s[imin] > 0.0 ? imin : imax;
        bool positive = s[imin] > 0.0;
        double lo = g.t[std::max(iext - 1, 0)];
        double hi = g.t[std::min(iext + 1, n)];
        auto [tm, sm] = detail::golden_min([&](double t) { return positive ? f(t) : -f(t); }, lo,
                                           hi, T * 1e-12);
        double val = positive ? sm : -sm;
        if ((positive && val < 0.0) || (!positive && val > 0.0)) {
            roots.push_back(detail::refine_root(f, lo, tm, f(lo), f(tm), 1e-12));
            roots.push_back(detail::refine_root(f, tm, hi, f(tm), f(hi), 1e-12));
        } else {
            out.empty = true;
            return out;
        }
    }

    std::sort(roots.begin(), roots.end());
    double last = -1e300;
    for (double t : roots) {
        if (t - last < T * 1e-10) continue;
        last = t;
        PlanarVector q = b.eval(t);
        PlanarVector vq = rotate90(q - c).normalized();
        PlanarVector n_out = -rotate90(b.tangent(t));
        out.crossings.push_back({t, q, dot(vq, n_out)});
    }
    return out;
}

}  // namespace

PlanarVector reflect(const PlanarVector& v, const PlanarVector& n) {
    return v - 2.0 * dot(n, v) * n;
}

HitResult next_hit(const LarmorState& state, const Boundary& b) {
    const double r = state.params.r;
    const PlanarVector c = state.center();
    CrossingScan scan = scan_circle_crossings(b, c, r);
    if (scan.on_parallel_curve) throw GrazingImpact("next_hit: tangential boundary contact");
    if (scan.empty) throw NoImpact("next_hit: Larmor circle misses the boundary");

    const double phi_x = (state.x - c).angle();
    const CircleCrossing* best = nullptr;
    double best_arc = 0.0;
    for (const CircleCrossing& cr : scan.crossings) {
        if (cr.exit_dot <= 0.0) continue;
        double arc = wrap_positive((cr.q - c).angle() - phi_x);
        if (arc == 0.0) arc = two_pi;
        if (!best || arc < best_arc) {
            best = &cr;
            best_arc = arc;
        }
    }
    if (!best) {
        for (const CircleCrossing& cr : scan.crossings)
            if (std::abs(cr.exit_dot) < grazing_tol)
                throw GrazingImpact("next_hit: tangential boundary contact");
        throw NoImpact("next_hit: no outgoing crossing");
    }
    if (std::abs(best->exit_dot) < grazing_tol)
        throw GrazingImpact("next_hit: tangential boundary contact");
    return {best->t, best->q, best_arc};
}

LarmorState billiard_step(const LarmorState& state, const Boundary& b) {
    const double r = state.params.r;
    const PlanarVector c = state.center();
    HitResult hit = next_hit(state, b);
    PlanarVector vq = velocity_from_center(c, hit.q, r);
    PlanarVector n_out = -rotate90(b.tangent(hit.t));
    PlanarVector v_new = reflect(vq, n_out).normalized();
    return {hit.q, v_new, state.params};
}

CenterStep center_step(const PlanarVector& P, const Boundary& b, const MagneticParams& params) {
    const double r = params.r;
    CenterStep out;
    CrossingScan scan = scan_circle_crossings(b, P, r);
    if (scan.on_parallel_curve) {
        out.next = P;
        out.fixed = true;
        return out;
    }
    if (scan.empty) throw NoImpact("center_step: circle about P misses the boundary");

    const CircleCrossing* best = nullptr;
    for (const CircleCrossing& cr : scan.crossings)
        if (cr.exit_dot > 0.0 && (!best || cr.exit_dot > best->exit_dot)) best = &cr;
    if (!best) {
        for (const CircleCrossing& cr : scan.crossings)
            if (std::abs(cr.exit_dot) < grazing_tol)
                throw GrazingImpact("center_step: tangential boundary contact");
        throw NoImpact("center_step: no outgoing crossing");
    }
    if (std::abs(best->exit_dot) < grazing_tol)
        throw GrazingImpact("center_step: tangential boundary contact");

    PlanarVector vq = velocity_from_center(P, best->q, r);
    PlanarVector tau = b.tangent(best->t);
    PlanarVector n_out = -rotate90(tau);
    PlanarVector v_new = reflect(vq, n_out).normalized();

    out.next = larmor_center(best->q, v_new, r);
    out.t_impact = best->t;
    out.q = best->q;
    out.v_in = vq;
    out.v_out = v_new;
    out.tangential = dot(v_new, tau);
    return out;
}

PlanarVector center_map_M(const PlanarVector& P, const Boundary& b, const MagneticParams& params) {
    return center_step(P, b, params).next;
}

std::vector<OrbitRecord> orbit(const LarmorState& start, const Boundary& b, int n_steps) {
    std::vector<OrbitRecord> records;
    records.reserve(std::max(n_steps, 0));
    LarmorState state = start;
    const double r = state.params.r;
    for (int step = 0; step < n_steps; ++step) {
        OrbitRecord rec;
        rec.step = step;
        rec.center_before = state.center();
        try {
            HitResult hit = next_hit(state, b);
            PlanarVector vq = velocity_from_center(rec.center_before, hit.q, r);
            PlanarVector n_out = -rotate90(b.tangent(hit.t));
            PlanarVector v_new = reflect(vq, n_out).normalized();
            state = {hit.q, v_new, state.params};
            rec.t_impact = hit.t;
            rec.q = hit.q;
            rec.v_in = vq;
            rec.v_out = v_new;
            rec.center_after = state.center();
            rec.arc_angle = hit.arc_angle;
            rec.integral_value = state.x.norm2() +
                                 2.0 * r * (state.v.x * state.x.y - state.v.y * state.x.x);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
            records.push_back(rec);
            break;
        }
        records.push_back(rec);
    }
    return records;
}

double rotation_angle_circle(double d, double r, double rho) {
    if (!(d > 0.0) || !(r > d))
        throw std::invalid_argument("rotation_angle_circle: requires 0 < d < r");
    const double lo = r - d, hi = r + d;
    const double tol = 1e-12 * hi;
    if (rho < lo - tol || rho > hi + tol)
        throw OutsideAnnulus("rotation_angle_circle: rho outside [r-d, r+d]");
    double arg = (rho * rho + d * d - r * r) / (2.0 * rho * d);
    arg = std::clamp(arg, -1.0, 1.0);
    return 2.0 * std::acos(arg);
}

double rotation_number_estimate(const std::vector<PlanarVector>& centers,
                                const PlanarVector& about) {
    if (centers.size() < 2) return 0.0;
    double scale = 0.0;
    for (const PlanarVector& c : centers) scale = std::max(scale, (c - about).norm());
    double total = 0.0;
    double prev = (centers[0] - about).angle();
    for (std::size_t k = 0; k < centers.size(); ++k) {
        double rho = (centers[k] - about).norm();
        if (rho < 1e-9 * std::max(scale, 1.0))
            throw NotAnnular("rotation_number_estimate: orbit passes through the reference point");
        if (k == 0) continue;
        double phi = (centers[k] - about).angle();
        double advance = wrap_positive(phi - prev);
        total += advance;
        prev = phi;
    }
    return total / (two_pi * static_cast<double>(centers.size() - 1));
}

LyapunovResult lyapunov_estimate(const PlanarVector& P, const Boundary& b,
                                 const MagneticParams& params, int n_iters, std::uint64_t seed) {
    if (n_iters < 1) throw std::invalid_argument("lyapunov_estimate: n_iters must be >= 1");
    const double delta0 = 1e-7;
    SplitMix64 rng(seed);
    double angle = rng.uniform(0.0, two_pi);
    PlanarVector p1 = P;
    PlanarVector p2 = P + delta0 * PlanarVector{std::cos(angle), std::sin(angle)};

    LyapunovResult out;
    std::vector<double> logs;
    logs.reserve(n_iters);
    for (int i = 0; i < n_iters; ++i) {
        try {
            p1 = center_map_M(p1, b, params);
            p2 = center_map_M(p2, b, params);
        } catch (const std::exception&) {
            out.complete = false;
            break;
        }
        PlanarVector diff = p2 - p1;
        double d = diff.norm();
        if (d <= 0.0) {
            double a = rng.uniform(0.0, two_pi);
            p2 = p1 + delta0 * PlanarVector{std::cos(a), std::sin(a)};
            logs.push_back(0.0);
            continue;
        }
        logs.push_back(std::log(d / delta0));
        p2 = p1 + (delta0 / d) * diff;
    }

    out.steps_used = static_cast<int>(logs.size());
    if (logs.empty()) return out;

    double sum = 0.0;
    for (double v : logs) sum += v;
    out.lambda = sum / logs.size();

    int n_blocks = std::min<int>(20, std::max<int>(1, static_cast<int>(logs.size()) / 10));
    if (n_blocks >= 2) {
        std::vector<double> means(n_blocks, 0.0);
        std::vector<int> counts(n_blocks, 0);
        for (std::size_t i = 0; i < logs.size(); ++i) {
            int blk = static_cast<int>(i * n_blocks / logs.size());
            means[blk] += logs[i];
            counts[blk] += 1;
        }
        double mean_of_means = 0.0;
        for (int bidx = 0; bidx < n_blocks; ++bidx) {
            means[bidx] /= std::max(counts[bidx], 1);
            mean_of_means += means[bidx];
        }
        mean_of_means /= n_blocks;
        double var = 0.0;
        for (int bidx = 0; bidx < n_blocks; ++bidx) {
            double dv = means[bidx] - mean_of_means;
            var += dv * dv;
        }
        var /= (n_blocks - 1);
        out.stderr_est = std::sqrt(var / n_blocks);
    }
    return out;
}

DistanceProbe probe_boundary_distance(const Boundary& b, const PlanarVector& P) {
    const Boundary::ScanGrid& g = b.scan_grid();
    const int n = Boundary::scan_intervals;
    const double T = b.period();
    int imin = 0, imax = 0;
    std::vector<double> s(n + 1);
    for (int i = 0; i <= n; ++i) {
        s[i] = (g.p[i] - P).norm2();
        if (s[i] < s[imin]) imin = i;
        if (s[i] > s[imax]) imax = i;
    }
    auto f = [&](double t) { return (b.eval(t) - P).norm2(); };
    double cell = T / n;
    double lo = (imin == 0) ? g.t[0] - cell : g.t[imin - 1];
    double hi = (imin == n) ? g.t[n] + cell : g.t[imin + 1];
    auto [t1, vmin] = detail::golden_min(f, lo, hi, T * 1e-9);
    (void)t1;
    lo = (imax == 0) ? g.t[0] - cell : g.t[imax - 1];
    hi = (imax == n) ? g.t[n] + cell : g.t[imax + 1];
    auto [t2, vneg] = detail::golden_min([&](double t) { return -f(t); }, lo, hi, T * 1e-9);
    (void)t2;
    return {std::sqrt(std::max(vmin, 0.0)), std::sqrt(std::max(-vneg, 0.0))};
}

bool in_phase_annulus(const Boundary& b, double r, const PlanarVector& P, double margin) {
    DistanceProbe probe = probe_boundary_distance(b, P);
    return probe.dmin < r - margin && probe.dmax > r + margin;
}

PlanarVector sample_phase_annulus(const Boundary& b, double r, double margin, SplitMix64& rng) {
    const Boundary::ScanGrid& g = b.scan_grid();
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const PlanarVector& p : g.p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    for (int attempt = 0; attempt < 100000; ++attempt) {
        PlanarVector P{rng.uniform(xmin - r, xmax + r), rng.uniform(ymin - r, ymax + r)};
        if (in_phase_annulus(b, r, P, margin)) return P;
    }
    throw std::runtime_error("sample_phase_annulus: rejection sampling failed");
}

Portrait phase_portrait(const Boundary& b, const MagneticParams& params, int n_seeds, int n_iters,
                        std::uint64_t seed) {
    Portrait out;
    SplitMix64 rng(seed);
    for (int orbit_id = 0; orbit_id < n_seeds; ++orbit_id) {
        std::string error;
        PlanarVector P;
        try {
            P = sample_phase_annulus(b, params.r, 1e-3, rng);
        } catch (const std::exception& e) {
            out.orbit_errors.push_back(e.what());
            continue;
        }
        for (int step = 0; step < n_iters; ++step) {
            try {
                CenterStep cs = center_step(P, b, params);
                if (cs.fixed) {
                    error = "orbit reached a parallel curve";
                    break;
                }
                out.points.push_back({orbit_id, step, P, cs.t_impact, cs.tangential});
                P = cs.next;
            } catch (const std::exception& e) {
                error = e.what();
                break;
            }
        }
        out.orbit_errors.push_back(error);
    }
    return out;
}

}  // namespace magbill
