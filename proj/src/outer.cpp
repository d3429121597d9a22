#include "magbill/outer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magbill/dynamics.hpp"
#include "magbill/errors.hpp"
#include "magbill/geom.hpp"
#include "magbill/rng.hpp"
#include "detail/rootfind.hpp"

namespace magbill {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double boundary_guard = 1e-9;

double wrap_positive(double angle) {
    double w = std::fmod(angle, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}
}  // namespace

PlanarVector tangent_center(const Boundary& gamma, double s, Orientation orientation, double r) {
    double sigma = orientation == Orientation::counterclockwise ? 1.0 : -1.0;
    return gamma.eval(s) + sigma * r * rotate90(gamma.tangent(s));
}

OuterConfig::OuterConfig(std::shared_ptr<const Boundary> gamma, Orientation orientation, double r)
    : gamma_(std::move(gamma)), orientation_(orientation), r_(r) {
    if (!gamma_) throw std::invalid_argument("outer config: null boundary");
    if (!(r > 0.0)) throw std::invalid_argument("outer config: r must be positive");
    if (orientation_ == Orientation::counterclockwise &&
        !(1.0 / r_ < gamma_->min_curvature() - 1e-9))
        throw std::invalid_argument(
            "outer config: counterclockwise case requires 1/r below the minimum curvature");
    const int n = Boundary::scan_intervals;
    const double T = gamma_->period();
    s_grid_.resize(n + 1);
    o_grid_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        s_grid_[i] = T * static_cast<double>(i) / n;
        o_grid_[i] = center_at(s_grid_[i]);
    }
}

PlanarVector OuterConfig::center_at(double s) const {
    return tangent_center(*gamma_, s, orientation_, r_);
}

OuterStep outer_step_full(const PlanarVector& P, const OuterConfig& config) {
    const double r = config.r();
    const double r2 = r * r;
    const Boundary& gamma = config.gamma();
    const double T = gamma.period();
    const int n = Boundary::scan_intervals;

    OuterStep out;

    // Identity on the annulus boundary: the base curve and the far curve of
    // antipodes of the tangent circles.
    DistanceProbe probe = probe_boundary_distance(gamma, P);
    if (probe.dmin < boundary_guard) {
        out.next = P;
        out.fixed = true;
        return out;
    }

    auto g = [&](double s) { return (config.center_at(s) - P).norm2() - r2; };

    const std::vector<double>& sg = config.s_grid();
    const std::vector<PlanarVector>& og = config.o_grid();
    std::vector<double> vals(n + 1);
    int imin = 0;
    for (int i = 0; i <= n; ++i) {
        vals[i] = (og[i] - P).norm2() - r2;
        if (vals[i] < vals[imin]) imin = i;
    }

    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        if (vals[i] == 0.0) {
            roots.push_back(sg[i]);
        } else if ((vals[i] < 0.0) != (vals[i + 1] < 0.0)) {
            roots.push_back(detail::refine_root(g, sg[i], sg[i + 1], vals[i], vals[i + 1], 1e-12));
        }
    }

    if (roots.empty()) {
        // P near the far annulus boundary produces a grazing double root at
        // the minimum of the center distance; recover it when it dips to r.
        double cell = T / n;
        double lo = (imin == 0) ? sg[0] - cell : sg[imin - 1];
        double hi = (imin == n) ? sg[n] + cell : sg[imin + 1];
        auto [sm, gm] = detail::golden_min(g, lo, hi, T * 1e-12);
        if (gm < 0.0) {
            roots.push_back(detail::refine_root(g, lo, sm, g(lo), g(sm), 1e-12));
            roots.push_back(detail::refine_root(g, sm, hi, g(sm), g(hi), 1e-12));
        } else {
            double dmin = std::sqrt(std::max(gm + r2, 0.0));
            if (std::abs(dmin - r) < 1e-7) {
                out.next = P;
                out.s_tangency = sm < 0.0 ? sm + T : (sm >= T ? sm - T : sm);
                out.o = config.center_at(sm);
                out.fixed = true;
                return out;
            }
            throw NoTangency("outer_step: no tangent circle through P");
        }
    }

    std::sort(roots.begin(), roots.end());
    double last = -1e300;
    const double sigma = config.sigma();
    bool found = false;
    double best_delta = 0.0, best_s = 0.0;
    PlanarVector best_o;
    for (double s : roots) {
        if (s - last < T * 1e-10) continue;
        last = s;
        PlanarVector O = config.center_at(s);
        PlanarVector gp = gamma.eval(s);
        double delta = wrap_positive(sigma * ((gp - O).angle() - (P - O).angle()));
        if (delta > std::numbers::pi + 1e-9) continue;
        if (!found || delta < best_delta) {
            found = true;
            best_delta = delta;
            best_s = s;
            best_o = O;
        }
    }
    if (!found) throw NoTangency("outer_step: no contact within the first half turn");

    PlanarVector u = (gamma.eval(best_s) - best_o) / r;
    PlanarVector w = P - best_o;
    out.next = best_o + 2.0 * dot(w, u) * u - w;
    out.s_tangency = best_s < 0.0 ? best_s + T : (best_s >= T ? best_s - T : best_s);
    out.o = best_o;
    return out;
}

PlanarVector outer_step(const PlanarVector& P, const OuterConfig& config) {
    return outer_step_full(P, config).next;
}

double equivalence_check(const std::shared_ptr<const Boundary>& gamma, const MagneticParams& params,
                         int n_samples, std::uint64_t seed, double* mean_out) {
    if (!gamma) throw std::invalid_argument("equivalence_check: null boundary");
    if (!params.admissible(*gamma))
        throw std::invalid_argument("equivalence_check: beta not admissible for this boundary");
    if (mean_out) *mean_out = 0.0;
    if (n_samples <= 0) return 0.0;

    auto inner = std::make_shared<OffsetBoundary>(gamma, params.r, Side::plus);
    OuterConfig config(inner, Orientation::counterclockwise, params.r);

    SplitMix64 rng(seed);
    double worst = 0.0;
    double total = 0.0;
    int done = 0;
    int attempts = 0;
    while (done < n_samples && attempts < 100 * n_samples + 1000) {
        ++attempts;
        PlanarVector P = sample_phase_annulus(*gamma, params.r, 1e-3, rng);
        try {
            PlanarVector tp = outer_step(P, config);
            PlanarVector mp = center_map_M(P, *gamma, params);
            double d = (tp - mp).norm();
            worst = std::max(worst, d);
            total += d;
            ++done;
        } catch (const NoTangency&) {
            continue;  // resample
        } catch (const GrazingImpact&) {
            continue;
        }
    }
    if (done < n_samples)
        throw std::runtime_error("equivalence_check: sampling failed to produce enough points");
    if (mean_out) *mean_out = total / n_samples;
    return worst;
}

}  // namespace magbill
