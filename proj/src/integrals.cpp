#include "magbill/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "magbill/dynamics.hpp"
#include "magbill/errors.hpp"
#include "magbill/geom.hpp"
#include "magbill/rng.hpp"
#include "detail/format.hpp"

namespace magbill {

int VelocityPoly::N() const {
    int n = 0;
    for (const auto& [kl, p] : terms_) {
        if (p.is_zero()) continue;
        n = std::max(n, kl.first + kl.second);
    }
    return n;
}

const BivarPoly* VelocityPoly::coeff(int k, int l) const {
    auto it = terms_.find({k, l});
    if (it == terms_.end()) return nullptr;
    return &it->second;
}

void VelocityPoly::add_term(int k, int l, const BivarPoly& p) {
    if (k < 0 || l < 0) throw std::invalid_argument("negative velocity exponent");
    auto& slot = terms_[{k, l}];
    slot = slot + p;
}

void VelocityPoly::add_coeff(int k, int l, int i, int j, double c) {
    if (k < 0 || l < 0) throw std::invalid_argument("negative velocity exponent");
    terms_[{k, l}].add_coeff(i, j, c);
}

double VelocityPoly::eval(const PlanarVector& x, const PlanarVector& v) const {
    double sum = 0.0;
    for (const auto& [kl, p] : terms_) {
        double vk = 1.0;
        for (int m = 0; m < kl.first; ++m) vk *= v.x;
        for (int m = 0; m < kl.second; ++m) vk *= v.y;
        sum += p.eval(x.x, x.y) * vk;
    }
    return sum;
}

VelocityPoly VelocityPoly::read(std::istream& in) {
    VelocityPoly out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long k, l, i, j;
        double c;
        if (!(ls >> k)) continue;
        if (!(ls >> l >> i >> j >> c)) {
            throw std::invalid_argument("bad velocity polynomial term on line " +
                                        std::to_string(lineno));
        }
        std::string rest;
        if (ls >> rest) {
            throw std::invalid_argument("trailing tokens on line " +
                                        std::to_string(lineno));
        }
        if (k < 0 || l < 0 || i < 0 || j < 0 || i > BivarPoly::max_degree ||
            j > BivarPoly::max_degree) {
            throw std::invalid_argument("exponent out of range on line " +
                                        std::to_string(lineno));
        }
        out.add_coeff((int)k, (int)l, (int)i, (int)j, c);
    }
    return out;
}

VelocityPoly VelocityPoly::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read(in);
}

void VelocityPoly::write(std::ostream& out) const {
    for (const auto& [kl, p] : terms_) {
        int d = p.degree();
        for (int i = 0; i <= d; ++i) {
            for (int j = 0; j + i <= d; ++j) {
                double c = p.coeff(i, j);
                if (c == 0.0) continue;
                out << kl.first << ' ' << kl.second << ' ' << i << ' ' << j
                    << ' ' << detail::fmt17(c) << '\n';
            }
        }
    }
}

VelocityPoly circle_integral(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    double r = 1.0 / beta;
    VelocityPoly phi;
    phi.add_coeff(0, 0, 2, 0, 1.0);
    phi.add_coeff(0, 0, 0, 2, 1.0);
    phi.add_coeff(1, 0, 0, 1, 2.0 * r);
    phi.add_coeff(0, 1, 1, 0, -2.0 * r);
    return phi;
}

VelocityPoly phi_from_F(const BivarPoly& F, double r) {
    VelocityPoly phi;
    int d = F.degree();
    for (int i = 0; i <= d; ++i) {
        for (int j = 0; j + i <= d; ++j) {
            double cij = F.coeff(i, j);
            if (cij == 0.0) continue;
            double binp = 1.0;
            double rp = 1.0;
            for (int p = 0; p <= i; ++p) {
                double binq = 1.0;
                double rq = 1.0;
                for (int q = 0; q <= j; ++q) {
                    phi.add_coeff(q, p, i - p, j - q, cij * binp * binq * rp * rq);
                    binq = binq * (double)(j - q) / (double)(q + 1);
                    rq *= r;
                }
                binp = binp * (double)(i - p) / (double)(p + 1);
                rp *= -r;
            }
        }
    }
    return phi;
}

namespace {

int monomial_count(int deg) { return (deg + 1) * (deg + 2) / 2; }

// column order: total degree, then x-exponent
void monomial_rows(int deg, std::vector<std::pair<int, int>>& idx) {
    idx.clear();
    for (int s = 0; s <= deg; ++s)
        for (int i = s; i >= 0; --i) idx.push_back({i, s - i});
}

BivarPoly assemble_from_scaled(const std::vector<std::pair<int, int>>& idx,
                               const Eigen::VectorXd& c,
                               const std::vector<BivarPoly>& xs_pow,
                               const std::vector<BivarPoly>& ys_pow) {
    BivarPoly F;
    for (size_t m = 0; m < idx.size(); ++m) {
        if (c[(Eigen::Index)m] == 0.0) continue;
        F = F + xs_pow[idx[m].first] * ys_pow[idx[m].second] * c[(Eigen::Index)m];
    }
    return F;
}

}  // namespace

PolyFit F_from_phi(const VelocityPoly& phi, double r,
                   const PlanarVector& box_lo, const PlanarVector& box_hi,
                   int oversample, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    if (box_hi.x <= box_lo.x || box_hi.y <= box_lo.y)
        throw std::invalid_argument("empty sample box");
    int N = phi.N();
    int deg = 2 * N;
    int dim = monomial_count(deg);
    int nsamp = std::max(oversample, 10) * dim;

    SplitMix64 rng(seed);
    std::vector<PlanarVector> pts((size_t)nsamp);
    Eigen::VectorXd rhs(nsamp);
    for (int s = 0; s < nsamp; ++s) {
        PlanarVector x{rng.uniform(box_lo.x, box_hi.x),
                       rng.uniform(box_lo.y, box_hi.y)};
        double th = rng.uniform(0.0, 2.0 * M_PI);
        PlanarVector v{std::cos(th), std::sin(th)};
        pts[(size_t)s] = x + r * rotate90(v);
        rhs[s] = phi.eval(x, v);
    }

    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double midx = 0.5 * (xmin + xmax), midy = 0.5 * (ymin + ymax);
    double hx = std::max(0.5 * (xmax - xmin), 1e-12);
    double hy = std::max(0.5 * (ymax - ymin), 1e-12);

    std::vector<std::pair<int, int>> idx;
    monomial_rows(deg, idx);

    Eigen::MatrixXd A(nsamp, dim);
    std::vector<double> px((size_t)deg + 1), py((size_t)deg + 1);
    for (int s = 0; s < nsamp; ++s) {
        double u = (pts[(size_t)s].x - midx) / hx;
        double w = (pts[(size_t)s].y - midy) / hy;
        px[0] = py[0] = 1.0;
        for (int m = 1; m <= deg; ++m) {
            px[(size_t)m] = px[(size_t)m - 1] * u;
            py[(size_t)m] = py[(size_t)m - 1] * w;
        }
        for (int m = 0; m < dim; ++m)
            A(s, m) = px[(size_t)idx[(size_t)m].first] * py[(size_t)idx[(size_t)m].second];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    Eigen::VectorXd c = qr.solve(rhs);

    PolyFit out;
    std::vector<BivarPoly> xs_pow((size_t)deg + 1), ys_pow((size_t)deg + 1);
    BivarPoly xs = BivarPoly::var_x() * (1.0 / hx) + BivarPoly::constant(-midx / hx);
    BivarPoly ys = BivarPoly::var_y() * (1.0 / hy) + BivarPoly::constant(-midy / hy);
    xs_pow[0] = BivarPoly::constant(1.0);
    ys_pow[0] = BivarPoly::constant(1.0);
    for (int m = 1; m <= deg; ++m) {
        xs_pow[(size_t)m] = xs_pow[(size_t)m - 1] * xs;
        ys_pow[(size_t)m] = ys_pow[(size_t)m - 1] * ys;
    }
    out.F = assemble_from_scaled(idx, c, xs_pow, ys_pow);

    if (qr.rank() < dim) {
        out.rank_deficient = true;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
        Eigen::VectorXd nd = svd.matrixV().col(dim - 1);
        out.null_direction = assemble_from_scaled(idx, nd, xs_pow, ys_pow);
    }

    double worst = 0.0;
    for (int s = 0; s < nsamp; ++s) {
        double d = std::abs(out.F.eval(pts[(size_t)s].x, pts[(size_t)s].y) - rhs[s]);
        worst = std::max(worst, d);
    }
    out.residual = worst;
    return out;
}

double invariance_residual(const BivarPoly& F, const Boundary& b,
                           const MagneticParams& params, int n_samples,
                           std::uint64_t seed, double* mean_out) {
    if (!params.admissible(b))
        throw std::invalid_argument("parameters not admissible for this boundary");
    if (mean_out) *mean_out = 0.0;
    if (n_samples <= 0) return 0.0;
    SplitMix64 rng(seed);
    double worst = 0.0;
    double total = 0.0;
    double scale = 1.0;
    long long attempts = 0;
    const long long cap = 100LL * n_samples + 1000;
    int done = 0;
    while (done < n_samples) {
        if (++attempts > cap)
            throw std::runtime_error("could not draw enough valid phase samples");
        PlanarVector P = sample_phase_annulus(b, params.r, 1e-3, rng);
        PlanarVector Q;
        try {
            Q = center_map_M(P, b, params);
        } catch (const GrazingImpact&) {
            continue;
        } catch (const NoImpact&) {
            continue;
        }
        double fp = F.eval(P.x, P.y);
        double fq = F.eval(Q.x, Q.y);
        scale = std::max({scale, std::abs(fp), std::abs(fq)});
        double d = std::abs(fq - fp);
        worst = std::max(worst, d);
        total += d;
        ++done;
    }
    if (mean_out) *mean_out = total / n_samples / scale;
    return worst / scale;
}

CurveStats boundary_constancy(const BivarPoly& F, const Boundary& b,
                              const MagneticParams& params, Side side,
                              int n_samples) {
    CurveStats st;
    if (n_samples <= 0) return st;
    double T = b.period();
    std::vector<double> vals((size_t)n_samples);
    double sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        PlanarVector p = parallel_point(b, T * i / n_samples, side, params.r);
        vals[(size_t)i] = F.eval(p.x, p.y);
        sum += vals[(size_t)i];
    }
    st.mean = sum / n_samples;
    for (double v : vals) st.max_dev = std::max(st.max_dev, std::abs(v - st.mean));
    return st;
}

BivarPoly normalize_integral(const BivarPoly& F, double c1, double c2) {
    return F * F - F * (c1 + c2) + BivarPoly::constant(c1 * c2);
}

GrazingPair grazing_centers(const Boundary& b, const MagneticParams& params,
                            double t, double eps, GrazingCase gc) {
    PlanarVector Q = b.eval(t);
    PlanarVector tau = b.tangent(t);
    double r = params.r;
    GrazingPair out;
    if (gc == GrazingCase::a) {
        out.p_minus = Q + r * rotate90(rotate(tau, -eps));
        out.p_plus = Q + r * rotate90(rotate(tau, eps));
    } else {
        out.p_minus = Q - r * rotate90(rotate(tau, eps));
        out.p_plus = Q - r * rotate90(rotate(tau, -eps));
    }
    return out;
}

std::vector<PlanarVector> parallel_samples(const Boundary& b, double r,
                                           Side side, int n) {
    std::vector<PlanarVector> pts;
    if (n <= 0) return pts;
    pts.reserve((size_t)n);
    double T = b.period();
    for (int i = 0; i < n; ++i) pts.push_back(parallel_point(b, T * i / n, side, r));
    return pts;
}

namespace {

struct Derivs2 {
    BivarPoly fx, fy, fxx, fxy, fyy;
};

Derivs2 second_derivs(const BivarPoly& F) {
    Derivs2 d;
    d.fx = F.derivative(0);
    d.fy = F.derivative(1);
    d.fxx = d.fx.derivative(0);
    d.fxy = d.fx.derivative(1);
    d.fyy = d.fy.derivative(1);
    return d;
}

double rem3_value(const Derivs2& d, double beta, const PlanarVector& p) {
    double gx = d.fx.eval(p.x, p.y);
    double gy = d.fy.eval(p.x, p.y);
    double g = std::hypot(gx, gy);
    if (g < 1e-10)
        throw VanishingGradient("gradient vanishes at a curve sample");
    double h = d.fxx.eval(p.x, p.y) * gy * gy -
               2.0 * d.fxy.eval(p.x, p.y) * gx * gy +
               d.fyy.eval(p.x, p.y) * gx * gx;
    return h + beta * g * g * g;
}

}  // namespace

CurveStats rem3_residual(const BivarPoly& F,
                         const std::vector<PlanarVector>& samples, double beta) {
    CurveStats st;
    if (samples.empty()) return st;
    Derivs2 d = second_derivs(F);
    std::vector<double> vals;
    vals.reserve(samples.size());
    double sum = 0.0;
    for (const auto& p : samples) {
        vals.push_back(rem3_value(d, beta, p));
        sum += vals.back();
    }
    st.mean = sum / (double)vals.size();
    for (double v : vals) st.max_dev = std::max(st.max_dev, std::abs(v - st.mean));
    return st;
}

Rem5Stats rem5_residual(const BivarPoly& f, const BivarPoly& g, int k,
                        double beta, const std::vector<PlanarVector>& samples) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    Rem5Stats st;
    if (samples.empty()) return st;
    Derivs2 d = second_derivs(f);
    std::vector<double> vals;
    vals.reserve(samples.size());
    double sum = 0.0;
    double vmax = 0.0;
    for (const auto& p : samples) {
        double base = rem3_value(d, beta, p);
        double powk = 1.0;
        for (int m = 0; m < k; ++m) powk *= base;
        double gv = g.eval(p.x, p.y);
        double val = gv * gv * gv * powk;
        vals.push_back(val);
        sum += val;
        vmax = std::max(vmax, std::abs(val));
    }
    st.mean = sum / (double)vals.size();
    for (double v : vals) st.max_dev = std::max(st.max_dev, std::abs(v - st.mean));
    st.nonzero = std::abs(st.mean) > 1e-6 * std::max(1.0, vmax);
    return st;
}

Rem1Result rem1_eps_check(const BivarPoly& F, const Boundary& b,
                          const MagneticParams& params, double t, GrazingCase gc,
                          const std::vector<double>& eps_ladder) {
    if (eps_ladder.empty()) throw std::invalid_argument("empty eps ladder");
    double r = params.r;
    Side side = gc == GrazingCase::a ? Side::plus : Side::minus;
    PlanarVector p0 = parallel_point(b, t, side, r);

    BivarPoly fx = F.derivative(0), fy = F.derivative(1);
    BivarPoly fxx = fx.derivative(0), fxy = fx.derivative(1), fyy = fy.derivative(1);
    BivarPoly fxxx = fxx.derivative(0), fxxy = fxx.derivative(1);
    BivarPoly fxyy = fxy.derivative(1), fyyy = fyy.derivative(1);

    double gx = fx.eval(p0.x, p0.y);
    double gy = fy.eval(p0.x, p0.y);
    double g = std::hypot(gx, gy);
    if (g < 1e-10) throw VanishingGradient("gradient vanishes at the base point");
    PlanarVector n{gx / g, gy / g};
    PlanarVector jn = rotate90(n);

    double c2xx = fxx.eval(p0.x, p0.y), c2xy = fxy.eval(p0.x, p0.y),
           c2yy = fyy.eval(p0.x, p0.y);
    double c3xxx = fxxx.eval(p0.x, p0.y), c3xxy = fxxy.eval(p0.x, p0.y),
           c3xyy = fxyy.eval(p0.x, p0.y), c3yyy = fyyy.eval(p0.x, p0.y);

    double poly_part = c3xxx * gy * gy * gy - 3.0 * c3xxy * gy * gy * gx +
                       3.0 * c3xyy * gy * gx * gx - c3yyy * gx * gx * gx;
    double inner = c2xx * gx * gy + c2xy * (gy * gy - gx * gx) - c2yy * gx * gy;
    double rem2 = poly_part + 3.0 * params.beta * g * inner;

    double msum = std::abs(c3xxx * gy * gy * gy) + std::abs(3.0 * c3xxy * gy * gy * gx) +
                  std::abs(3.0 * c3xyy * gy * gx * gx) + std::abs(c3yyy * gx * gx * gx) +
                  3.0 * params.beta * g *
                      (std::abs(c2xx * gx * gy) + std::abs(c2xy * (gy * gy - gx * gx)) +
                       std::abs(c2yy * gx * gy));

    Rem1Result out;
    out.predicted = r * r * r / (3.0 * g * g * g) * rem2;
    if (std::abs(rem2) <= 1e-9 * std::max(1.0, msum)) {
        out.degenerate = true;
        out.ratio = std::numeric_limits<double>::quiet_NaN();
        out.eps3_coeff = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    std::vector<double> eps = eps_ladder;
    std::sort(eps.begin(), eps.end(), std::greater<double>());
    size_t m = eps.size();
    std::vector<double> h(m), val(m);
    for (size_t i = 0; i < m; ++i) {
        double e = eps[i];
        if (!(e > 0.0)) throw std::invalid_argument("eps ladder entries must be positive");
        double s = std::sin(e);
        double c1m = 2.0 * std::sin(0.5 * e) * std::sin(0.5 * e);
        PlanarVector dc = r * c1m * n;
        PlanarVector dt = r * s * jn;
        PlanarVector pa = p0 + dc - dt;
        PlanarVector pb = p0 + dc + dt;
        double D = F.eval(pa.x, pa.y) - F.eval(pb.x, pb.y);
        h[i] = e * e;
        val[i] = D / (e * e * e);
    }
    // Neville extrapolation in eps^2 to 0
    for (size_t lev = 1; lev < m; ++lev) {
        for (size_t i = 0; i + lev < m; ++i) {
            val[i] = (h[i] * val[i + 1] - h[i + lev] * val[i]) / (h[i] - h[i + lev]);
        }
    }
    out.eps3_coeff = val[0];
    out.ratio = out.eps3_coeff / out.predicted;
    return out;
}

std::string check_report_json(const CheckReport& rep) {
    std::ostringstream os;
    os << "{\"check\": \"" << rep.check << "\", \"samples\": " << rep.samples
       << ", \"mean\": " << detail::fmt17(rep.mean)
       << ", \"max_abs_residual\": " << detail::fmt17(rep.max_abs_residual)
       << ", \"tolerance\": " << detail::fmt17(rep.tolerance)
       << ", \"pass\": " << (rep.pass ? "true" : "false") << "}";
    return os.str();
}

}  // namespace magbill
