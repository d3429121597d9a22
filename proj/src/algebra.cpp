#include "magbill/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "magbill/boundary.hpp"
#include "magbill/errors.hpp"
#include "magbill/geom.hpp"
#include "magbill/rng.hpp"
#include "detail/format.hpp"

namespace magbill {

namespace {

double point_scale(const BivarPoly& f, double norm) {
    return f.max_abs_coeff() * std::pow(std::max(1.0, norm), f.degree());
}

double cnorm(const ComplexPoint& p) {
    return std::sqrt(std::norm(p.x) + std::norm(p.y));
}

// A zero of order k is pinned down only to about eps^(1/k) by double
// arithmetic, so the fixed clustering radius leaves higher-order roots split
// into nearby simple ones.  Regroup by proximity and accept a merged cluster
// only when the Taylor coefficients of p at the averaged center match a
// single zero of the combined order at the constellation radius.
void merge_multiple_root_clusters(const UniPoly& p, std::vector<RootCluster>& clusters) {
    const std::size_t n = clusters.size();
    if (n < 2) return;

    struct Node {
        std::complex<double> c;
        int k;
        double r;
    };

    auto taylor_at = [&p](const std::complex<double>& c, int upto) {
        std::vector<std::complex<double>> a(p.coeffs());
        std::vector<std::complex<double>> t;
        for (int pass = 0; pass <= upto; ++pass) {
            if (a.empty()) {
                t.push_back(0.0);
                continue;
            }
            for (int i = static_cast<int>(a.size()) - 2; i >= 0; --i) a[i] += c * a[i + 1];
            t.push_back(a[0]);
            a.erase(a.begin());
        }
        return t;
    };

    // Polishes the candidate center with Newton steps driven by the Taylor
    // coefficient of order k-1 (the pointwise values of p are noise-drowned
    // near a k-fold zero, the shifted coefficients are not), then checks that
    // the profile matches a single zero of order k at the given radius.
    auto verified_zero = [&](Node& nd) {
        if (nd.k > p.degree()) return false;
        std::complex<double> c = nd.c;
        for (int it = 0; it < 2; ++it) {
            auto t = taylor_at(c, nd.k);
            if (std::abs(t[nd.k]) == 0.0) return false;
            std::complex<double> step =
                t[nd.k - 1] / (static_cast<double>(nd.k) * t[nd.k]);
            if (std::abs(step) > nd.r + 1e-12) return false;
            c -= step;
        }
        auto t = taylor_at(c, nd.k);
        double scale = 0.0;
        double pw = 1.0;
        const double base = std::max(1.0, std::abs(c));
        for (const auto& q : p.coeffs()) {
            scale += std::abs(q) * pw;
            pw *= base;
        }
        const double lead = std::abs(t[nd.k]);
        for (int j = 0; j < nd.k; ++j) {
            double bound = 0.1 * lead * std::pow(nd.r, nd.k - j) + 1e-12 * scale;
            if (std::abs(t[j]) > bound) return false;
        }
        nd.c = c;
        return true;
    };

    auto fuse = [](const Node& a, const Node& b) {
        int k = a.k + b.k;
        std::complex<double> c =
            (a.c * static_cast<double>(a.k) + b.c * static_cast<double>(b.k)) /
            static_cast<double>(k);
        double r = std::max(std::abs(a.c - c) + a.r, std::abs(b.c - c) + b.r);
        return Node{c, k, r};
    };

    std::vector<int> comp(n);
    for (std::size_t i = 0; i < n; ++i) comp[i] = static_cast<int>(i);
    auto root_of = [&](int i) {
        while (comp[i] != i) i = comp[i] = comp[comp[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double span = 0.02 * std::max({1.0, std::abs(clusters[i].value),
                                           std::abs(clusters[j].value)});
            if (std::abs(clusters[i].value - clusters[j].value) <= span)
                comp[root_of(static_cast<int>(i))] = root_of(static_cast<int>(j));
        }
    }

    std::vector<RootCluster> merged;
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<Node> mem;
        for (std::size_t j = i; j < n; ++j) {
            if (!done[j] && root_of(static_cast<int>(j)) == root_of(static_cast<int>(i))) {
                mem.push_back({clusters[j].value, clusters[j].multiplicity, 1e-6});
                done[j] = true;
            }
        }
        while (mem.size() > 1) {
            Node whole = mem[0];
            for (std::size_t j = 1; j < mem.size(); ++j) whole = fuse(whole, mem[j]);
            if (verified_zero(whole)) {
                mem.assign(1, whole);
                break;
            }
            double best_gap = 0.0;
            std::size_t bi = mem.size(), bj = mem.size();
            Node best{};
            for (std::size_t a = 0; a < mem.size(); ++a) {
                for (std::size_t b = a + 1; b < mem.size(); ++b) {
                    double gap = std::abs(mem[a].c - mem[b].c);
                    if (bi != mem.size() && gap >= best_gap) continue;
                    Node cand = fuse(mem[a], mem[b]);
                    if (verified_zero(cand)) {
                        best_gap = gap;
                        bi = a;
                        bj = b;
                        best = cand;
                    }
                }
            }
            if (bi == mem.size()) break;
            mem[bi] = best;
            mem.erase(mem.begin() + static_cast<std::ptrdiff_t>(bj));
        }
        for (const auto& nd : mem) merged.push_back({nd.c, nd.k});
    }
    clusters = std::move(merged);
}

}  // namespace

BivarPoly ellipse_offset_poly(double a, double b, double r) {
    if (!(a > 0.0) || !(b > 0.0) || !(r > 0.0))
        throw std::invalid_argument("ellipse offset needs positive a, b, r");
    if (a < b) throw std::invalid_argument("require a >= b");

    using P = BivarPoly;
    const double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4;
    const double b2 = b * b, b4 = b2 * b2, b6 = b4 * b2, b8 = b4 * b4;
    const double r2 = r * r, r4 = r2 * r2, r6 = r4 * r2;

    P x2 = P::monomial(2, 0, 1.0);
    P y2 = P::monomial(0, 2, 1.0);
    P x4 = x2 * x2, y4 = y2 * y2, x6 = x4 * x2, y6 = y4 * y2;
    P x2y2 = x2 * y2;

    P r2my2 = P::constant(r2) - y2;
    P r2mx2 = P::constant(r2) - x2;
    P s = x2 + y2 - P::constant(r2);  // x^2 + y^2 - r^2

    P t1 = (P::constant(b4) + r2my2 * r2my2 - (P::constant(r2) + y2) * (2.0 * b2)) * a8;

    P t2 = (r2mx2 * r2mx2) *
           (P::constant(b4) - (P::constant(r2) - x2 + y2) * (2.0 * b2) + s * s) * b4;

    P t3 = (P::constant(b6) + (r2my2 * r2my2) * (P::constant(r2) + x2 - y2) -
            (P::constant(r2) - x2 * 2.0 + y2 * 3.0) * b4 -
            (P::constant(r4) + (x2 - y2) * y2 * 3.0 + (x2 * 3.0 + y2 * 2.0) * r2) * b2) *
           (-2.0 * a6);

    P t4 = ((P::constant(r2) + x2) * (-b6) -
            (s * s) * (P::constant(r4) - x2y2 - (x2 + y2) * r2) +
            (P::constant(r4) - x4 * 3.0 + x2y2 * 3.0 + (x2 * 2.0 + y2 * 3.0) * r2) * b4 +
            (P::constant(r6) - x6 * 2.0 + x4 * y2 - x2 * y4 * 3.0 +
             (x2 * (-4.0) + y2 * 2.0) * r4 + (x4 * 5.0 - x2y2 * 3.0 - y4 * 3.0) * r2) * b2) *
           (2.0 * a2 * b2);

    P t5 = (P::constant(b8) + (P::constant(r2) + x2 * 3.0 - y2 * 2.0) * (2.0 * b6) +
            (r2my2 * r2my2) * (s * s) -
            (P::constant(3.0 * r4) - x4 * 3.0 + x2y2 * 5.0 - y4 * 3.0 +
             (x2 + y2) * (4.0 * r2)) * (2.0 * b4) +
            (P::constant(r6) - x4 * y2 * 3.0 + x2 * y4 - y6 * 2.0 +
             (x2 - y2 * 2.0) * (2.0 * r4) +
             (x4 * (-3.0) - x2y2 * 3.0 + y4 * 5.0) * r2) * (2.0 * b2)) *
           a4;

    return t1 + t2 + t3 + t4 + t5;
}

double offset_vanishing_check(double a, double b, double r, int n_samples) {
    BivarPoly f = ellipse_offset_poly(a, b, r);
    EllipseBoundary gamma(a, b);
    double T = gamma.period();
    double worst = 0.0;
    for (Side side : {Side::plus, Side::minus}) {
        for (int i = 0; i < n_samples; ++i) {
            PlanarVector p = parallel_point(gamma, T * i / n_samples, side, r);
            double scale = point_scale(f, p.norm());
            worst = std::max(worst, std::abs(f.eval(p)) / scale);
        }
    }
    return worst;
}

std::vector<ComplexPoint> ellipse_offset_singular_points(double a, double b, double r) {
    if (a == b) throw CertificationFailed("circle has smooth offsets");
    if (!(a > b) || !(b > 0.0))
        throw std::invalid_argument("require a > b > 0");
    if (!(r > a * a / b))
        throw std::invalid_argument("r must exceed a^2/b");

    using C = std::complex<double>;
    C sy = std::sqrt(C(b * b - a * a, 0.0)) * std::sqrt(C(a * a - r * r, 0.0)) / a;
    C sx = std::sqrt(C(a * a - b * b, 0.0)) * std::sqrt(C(b * b - r * r, 0.0)) / b;

    std::vector<ComplexPoint> pts = {
        {C(0.0, 0.0), sy},
        {C(0.0, 0.0), -sy},
        {sx, C(0.0, 0.0)},
        {-sx, C(0.0, 0.0)},
    };

    BivarPoly f = ellipse_offset_poly(a, b, r);
    BivarPoly fx = f.derivative(0);
    BivarPoly fy = f.derivative(1);
    for (const auto& p : pts) {
        double scale = point_scale(f, cnorm(p));
        double rf = std::abs(f.eval(p.x, p.y));
        double rx = std::abs(fx.eval(p.x, p.y));
        double ry = std::abs(fy.eval(p.x, p.y));
        if (rf > 1e-6 * scale || rx > 1e-6 * scale || ry > 1e-6 * scale) {
            std::ostringstream os;
            os << "singular point residuals too large: |f|=" << rf
               << " |fx|=" << rx << " |fy|=" << ry << " scale=" << scale;
            throw CertificationFailed(os.str());
        }
    }
    return pts;
}

std::vector<ComplexPoint> singular_search(const BivarPoly& f, int n_starts,
                                          std::uint64_t seed, double box) {
    if (f.degree() < 2) throw std::invalid_argument("degree must be at least 2");
    using C = std::complex<double>;
    BivarPoly fx = f.derivative(0);
    BivarPoly fy = f.derivative(1);
    BivarPoly fxx = fx.derivative(0);
    BivarPoly fxy = fx.derivative(1);
    BivarPoly fyy = fy.derivative(1);

    SplitMix64 rng(seed);
    std::vector<ComplexPoint> found;
    for (int s = 0; s < n_starts; ++s) {
        C zx(rng.uniform(-box, box), rng.uniform(-box, box));
        C zy(rng.uniform(-box, box), rng.uniform(-box, box));
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            C gx = fx.eval(zx, zy);
            C gy = fy.eval(zx, zy);
            C jxx = fxx.eval(zx, zy);
            C jxy = fxy.eval(zx, zy);
            C jyy = fyy.eval(zx, zy);
            C det = jxx * jyy - jxy * jxy;
            if (std::abs(det) < 1e-14) break;
            C dx = (-gx * jyy + gy * jxy) / det;
            C dy = (-jxx * gy + jxy * gx) / det;
            zx += dx;
            zy += dy;
            double zn = std::sqrt(std::norm(zx) + std::norm(zy));
            if (zn > 1e6) break;
            if (std::abs(dx) + std::abs(dy) < 1e-12 * (1.0 + zn)) {
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        ComplexPoint p{zx, zy};
        double scale = point_scale(f, cnorm(p));
        if (std::abs(f.eval(zx, zy)) > 1e-8 * scale) continue;
        if (std::abs(fx.eval(zx, zy)) > 1e-7 * scale ||
            std::abs(fy.eval(zx, zy)) > 1e-7 * scale)
            continue;
        bool dup = false;
        for (const auto& q : found) {
            if (std::abs(q.x - p.x) + std::abs(q.y - p.y) < 1e-6) {
                dup = true;
                break;
            }
        }
        if (!dup) found.push_back(p);
    }
    std::sort(found.begin(), found.end(), [](const ComplexPoint& u, const ComplexPoint& v) {
        if (u.x.real() != v.x.real()) return u.x.real() < v.x.real();
        if (u.x.imag() != v.x.imag()) return u.x.imag() < v.x.imag();
        if (u.y.real() != v.y.real()) return u.y.real() < v.y.real();
        return u.y.imag() < v.y.imag();
    });
    return found;
}

double implicit_curvature(const BivarPoly& f, const PlanarVector& p) {
    BivarPoly fx = f.derivative(0);
    BivarPoly fy = f.derivative(1);
    double gx = fx.eval(p);
    double gy = fy.eval(p);
    double g = std::hypot(gx, gy);
    if (g < 1e-10) throw VanishingGradient("gradient vanishes at the point");
    double scale = point_scale(f, p.norm());
    if (std::abs(f.eval(p)) > 1e-8 * scale)
        throw NotOnCurve("point is not on the zero set");
    double h = fx.derivative(0).eval(p) * gy * gy -
               2.0 * fx.derivative(1).eval(p) * gx * gy +
               fy.derivative(1).eval(p) * gx * gx;
    return h / (g * g * g);
}

std::vector<InfinityPoint> infinity_report(const BivarPoly& f) {
    int d = f.degree();
    if (d < 1) throw std::invalid_argument("degree must be at least 1");
    UniPoly p = leading_form(f);
    BivarPoly fd1 = d >= 1 ? homogeneous_part(f, d - 1) : BivarPoly();

    std::vector<InfinityPoint> out;
    std::vector<RootCluster> clusters;
    if (p.degree() >= 1) {
        clusters = cluster_roots(uni_roots(p), 1e-6);
        merge_multiple_root_clusters(p, clusters);
    }
    for (const auto& cl : clusters) {
        InfinityPoint ip;
        ip.ratio = cl.value;
        ip.multiplicity = cl.multiplicity;
        ip.isotropic = std::abs(cl.value - std::complex<double>(0.0, 1.0)) < 1e-8 ||
                       std::abs(cl.value + std::complex<double>(0.0, 1.0)) < 1e-8;
        if (cl.multiplicity >= 2 && !fd1.is_zero()) {
            double norm = std::sqrt(std::norm(cl.value) + 1.0);
            double scale = f.max_abs_coeff() * std::pow(std::max(1.0, norm), d - 1);
            ip.tangency = std::abs(fd1.eval(cl.value, std::complex<double>(1.0, 0.0))) >
                          1e-8 * scale;
        }
        out.push_back(ip);
    }
    int deficit = d - std::max(p.degree(), 0);
    if (deficit > 0) {
        InfinityPoint ip;
        ip.y_zero_direction = true;
        ip.multiplicity = deficit;
        if (deficit >= 2 && !fd1.is_zero()) {
            double scale = f.max_abs_coeff();
            ip.tangency = std::abs(fd1.eval(std::complex<double>(1.0, 0.0),
                                            std::complex<double>(0.0, 0.0))) >
                          1e-8 * scale;
        }
        out.push_back(ip);
    }
    return out;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::obstructed_affine_singularity:
            return "obstructed_affine_singularity";
        case Verdict::obstructed_transversal_infinity:
            return "obstructed_transversal_infinity";
        default:
            return "no_obstruction";
    }
}

namespace {

Verdict decide(const ObstructionReport& rep) {
    if (!rep.affine_singular.empty()) return Verdict::obstructed_affine_singularity;
    for (const auto& ip : rep.infinity) {
        if (ip.multiplicity == 1 && !ip.isotropic && !ip.y_zero_direction)
            return Verdict::obstructed_transversal_infinity;
    }
    return Verdict::no_obstruction;
}

}  // namespace

ObstructionReport obstruction_report(const BivarPoly& f, int search_budget,
                                     std::uint64_t seed) {
    ObstructionReport rep;
    if (f.degree() >= 2 && search_budget > 0)
        rep.affine_singular = singular_search(f, search_budget, seed);
    if (f.degree() >= 1) rep.infinity = infinity_report(f);
    rep.verdict = decide(rep);
    return rep;
}

ObstructionReport ellipse_obstruction_report(double a, double b, double r,
                                             int search_budget, std::uint64_t seed) {
    BivarPoly f = ellipse_offset_poly(a, b, r);
    ObstructionReport rep;
    rep.affine_singular = ellipse_offset_singular_points(a, b, r);
    if (search_budget > 0) {
        for (const auto& p : singular_search(f, search_budget, seed)) {
            bool dup = false;
            for (const auto& q : rep.affine_singular) {
                if (std::abs(q.x - p.x) + std::abs(q.y - p.y) < 1e-6) {
                    dup = true;
                    break;
                }
            }
            if (!dup) rep.affine_singular.push_back(p);
        }
    }
    rep.infinity = infinity_report(f);
    rep.verdict = decide(rep);
    return rep;
}

std::string obstruction_report_json(const ObstructionReport& rep) {
    using detail::fmt17;
    std::ostringstream os;
    os << "{\"verdict\": \"" << verdict_name(rep.verdict) << "\", \"affine_singular\": [";
    for (size_t i = 0; i < rep.affine_singular.size(); ++i) {
        const auto& p = rep.affine_singular[i];
        if (i) os << ", ";
        os << '[' << fmt17(p.x.real()) << ", " << fmt17(p.x.imag()) << ", "
           << fmt17(p.y.real()) << ", " << fmt17(p.y.imag()) << ']';
    }
    os << "], \"infinity\": [";
    for (size_t i = 0; i < rep.infinity.size(); ++i) {
        const auto& ip = rep.infinity[i];
        if (i) os << ", ";
        os << "{\"ratio\": ";
        if (ip.y_zero_direction)
            os << "null";
        else
            os << '[' << fmt17(ip.ratio.real()) << ", " << fmt17(ip.ratio.imag()) << ']';
        os << ", \"multiplicity\": " << ip.multiplicity
           << ", \"isotropic\": " << (ip.isotropic ? "true" : "false")
           << ", \"tangency\": " << (ip.tangency ? "true" : "false") << '}';
    }
    os << "]}";
    return os.str();
}

std::vector<RScanEntry> r_scan(double a, double b, const std::vector<double>& r_grid) {
    std::vector<RScanEntry> out;
    for (double r : r_grid) {
        RScanEntry e;
        e.r = r;
        try {
            ellipse_offset_singular_points(a, b, r);
            e.certified = true;
            e.detail = "four singular points certified";
        } catch (const std::exception& ex) {
            e.certified = false;
            e.detail = ex.what();
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace magbill
