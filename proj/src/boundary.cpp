#include "magbill/boundary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "magbill/errors.hpp"
#include "detail/rootfind.hpp"

namespace magbill {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void Boundary::ensure_cache() const {
    std::call_once(cache_once_, [this] {
        const double T = period();
        const int n = scan_intervals;
        grid_.t.resize(n + 1);
        grid_.p.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            grid_.t[i] = T * static_cast<double>(i) / n;
            grid_.p[i] = eval(grid_.t[i]);
        }
        for (int i = 0; i < n; ++i)
            grid_.max_chord = std::max(grid_.max_chord, (grid_.p[i + 1] - grid_.p[i]).norm());

        const int m = 4096;
        double best = curvature(0.0);
        int best_i = 0;
        for (int i = 1; i < m; ++i) {
            double k = curvature(T * static_cast<double>(i) / m);
            if (k < best) {
                best = k;
                best_i = i;
            }
        }
        double lo = T * static_cast<double>(best_i - 1) / m;
        double hi = T * static_cast<double>(best_i + 1) / m;
        auto [tmin, kmin] =
            detail::golden_min([this](double t) { return curvature(t); }, lo, hi, T * 1e-12);
        (void)tmin;
        min_curvature_ = std::min(best, kmin);
    });
}

const Boundary::ScanGrid& Boundary::scan_grid() const {
    ensure_cache();
    return grid_;
}

double Boundary::min_curvature() const {
    ensure_cache();
    return min_curvature_;
}

bool Boundary::inside(const PlanarVector& p) const {
    const PlanarVector c0 = reference_point();
    const PlanarVector d = p - c0;
    const double dist = d.norm();
    if (dist < 1e-14) return true;
    const PlanarVector u = d / dist;

    const ScanGrid& g = scan_grid();
    const int n = scan_intervals;
    // Locate the boundary point in direction u: the sign change of
    // cross(u, eval(t)-c0) on the half-plane dot(u, eval(t)-c0) > 0.
    auto s = [&](const PlanarVector& q) { return cross(u, q - c0); };
    int cell = -1;
    for (int i = 0; i < n; ++i) {
        double si = s(g.p[i]);
        double sj = s(g.p[i + 1]);
        if ((si <= 0.0) != (sj <= 0.0) || si == 0.0) {
            if (dot(u, g.p[i] - c0) > 0.0 || dot(u, g.p[i + 1] - c0) > 0.0) {
                cell = i;
                break;
            }
        }
    }
    if (cell < 0) return false;

    auto f = [&](double t) { return s(eval(t)); };
    double a = g.t[cell], b = g.t[cell + 1];
    double t_star = detail::refine_root(f, a, b, f(a), f(b), 1e-12);
    double boundary_dist = (eval(t_star) - c0).norm();
    return dist <= boundary_dist;
}

CircleBoundary::CircleBoundary(double d, PlanarVector center) : d_(d), center_(center) {
    if (!(d > 0.0)) throw std::invalid_argument("circle boundary: d must be positive");
}

double CircleBoundary::period() const { return two_pi; }

PlanarVector CircleBoundary::eval(double t) const {
    return {center_.x + d_ * std::cos(t), center_.y + d_ * std::sin(t)};
}

PlanarVector CircleBoundary::tangent(double t) const { return {-std::sin(t), std::cos(t)}; }

double CircleBoundary::curvature(double) const { return 1.0 / d_; }

EllipseBoundary::EllipseBoundary(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse boundary: a,b must be positive");
}

double EllipseBoundary::period() const { return two_pi; }

PlanarVector EllipseBoundary::eval(double t) const { return {a_ * std::cos(t), b_ * std::sin(t)}; }

PlanarVector EllipseBoundary::tangent(double t) const {
    PlanarVector d{-a_ * std::sin(t), b_ * std::cos(t)};
    return d.normalized();
}

double EllipseBoundary::curvature(double t) const {
    double s = std::sin(t), c = std::cos(t);
    double w = a_ * a_ * s * s + b_ * b_ * c * c;
    return a_ * b_ / (w * std::sqrt(w));
}

FourierBoundary::FourierBoundary(double base, std::vector<Term> terms)
    : base_(base), terms_(std::move(terms)) {
    if (!(base > 0.0)) throw std::invalid_argument("fourier boundary: base must be positive");
    for (const Term& term : terms_)
        if (term.k < 0) throw std::invalid_argument("fourier boundary: harmonic index must be >= 0");
    const int m = 4096;
    for (int i = 0; i < m; ++i) {
        double t = two_pi * static_cast<double>(i) / m;
        if (rho(t) <= 0.0)
            throw std::invalid_argument("fourier boundary: radius not positive everywhere");
        if (curvature(t) <= 1e-12)
            throw std::invalid_argument("fourier boundary: not strictly convex");
    }
}

double FourierBoundary::rho(double t) const {
    double v = base_;
    for (const Term& term : terms_) v += term.amp * std::cos(term.k * t + term.phase);
    return v;
}

double FourierBoundary::drho(double t) const {
    double v = 0.0;
    for (const Term& term : terms_) v -= term.amp * term.k * std::sin(term.k * t + term.phase);
    return v;
}

double FourierBoundary::ddrho(double t) const {
    double v = 0.0;
    for (const Term& term : terms_)
        v -= term.amp * term.k * term.k * std::cos(term.k * t + term.phase);
    return v;
}

double FourierBoundary::period() const { return two_pi; }

PlanarVector FourierBoundary::eval(double t) const {
    double p = rho(t);
    return {p * std::cos(t), p * std::sin(t)};
}

PlanarVector FourierBoundary::tangent(double t) const {
    double p = rho(t), dp = drho(t);
    double c = std::cos(t), s = std::sin(t);
    PlanarVector d{dp * c - p * s, dp * s + p * c};
    return d.normalized();
}

double FourierBoundary::curvature(double t) const {
    double p = rho(t), dp = drho(t), ddp = ddrho(t);
    double w = p * p + dp * dp;
    return (p * p + 2.0 * dp * dp - p * ddp) / (w * std::sqrt(w));
}

OffsetBoundary::OffsetBoundary(std::shared_ptr<const Boundary> base, double r, Side side)
    : base_(std::move(base)), r_(r), side_(side) {
    if (!base_) throw std::invalid_argument("offset boundary: null base");
    if (!(r > 0.0)) throw std::invalid_argument("offset boundary: r must be positive");
    if (side_ == Side::plus) {
        const double T = base_->period();
        for (int i = 0; i < 1024; ++i) {
            double k = base_->curvature(T * static_cast<double>(i) / 1024);
            if (r_ * k <= 1.0 + 1e-12)
                throw CuspSingularity("offset boundary: r*k <= 1 on the plus side");
        }
    }
}

double OffsetBoundary::period() const { return base_->period(); }

PlanarVector OffsetBoundary::eval(double t) const {
    return base_->eval(t) + side_sign(side_) * r_ * rotate90(base_->tangent(t));
}

PlanarVector OffsetBoundary::tangent(double t) const {
    PlanarVector tau = base_->tangent(t);
    return side_ == Side::plus ? -tau : tau;
}

double OffsetBoundary::curvature(double t) const {
    double k = base_->curvature(t);
    double denom = side_ == Side::plus ? r_ * k - 1.0 : r_ * k + 1.0;
    return k / denom;
}

PlanarVector OffsetBoundary::reference_point() const {
    PlanarVector sum{0.0, 0.0};
    const double T = period();
    const int m = 256;
    for (int i = 0; i < m; ++i) sum += eval(T * static_cast<double>(i) / m);
    return sum / static_cast<double>(m);
}

MagneticParams::MagneticParams(double beta_) : beta(beta_), r(1.0 / beta_) {
    if (!(beta_ > 0.0)) throw std::invalid_argument("magnetic params: beta must be positive");
}

MagneticParams MagneticParams::from_radius(double r_) {
    if (!(r_ > 0.0)) throw std::invalid_argument("magnetic params: r must be positive");
    return MagneticParams(1.0 / r_);
}

bool MagneticParams::admissible(const Boundary& b) const {
    return beta < b.min_curvature() - 1e-9;
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("boundary spec: bad number for " + what + ": '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

}  // namespace

std::shared_ptr<Boundary> parse_boundary(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("boundary spec: expected '<kind>:<params>', got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);

    if (kind == "circle" || kind == "ellipse") {
        double d = 0.0, cx = 0.0, cy = 0.0, a = 0.0, b = 0.0;
        bool has_d = false, has_a = false, has_b = false;
        for (const std::string& item : split(rest, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("boundary spec: expected key=value, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            const double val = parse_number(item.substr(eq + 1), key);
            if (kind == "circle" && key == "d") {
                d = val;
                has_d = true;
            } else if (kind == "circle" && key == "cx") {
                cx = val;
            } else if (kind == "circle" && key == "cy") {
                cy = val;
            } else if (kind == "ellipse" && key == "a") {
                a = val;
                has_a = true;
            } else if (kind == "ellipse" && key == "b") {
                b = val;
                has_b = true;
            } else {
                throw std::invalid_argument("boundary spec: unknown key '" + key + "' for " + kind);
            }
        }
        if (kind == "circle") {
            if (!has_d) throw std::invalid_argument("boundary spec: circle requires d");
            return std::make_shared<CircleBoundary>(d, PlanarVector{cx, cy});
        }
        if (!has_a || !has_b) throw std::invalid_argument("boundary spec: ellipse requires a and b");
        return std::make_shared<EllipseBoundary>(a, b);
    }

    if (kind == "fourier") {
        double base = 0.0;
        bool has_base = false;
        std::vector<FourierBoundary::Term> terms;
        for (const std::string& item : split(rest, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("boundary spec: expected key=value, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            if (key == "base") {
                base = parse_number(val, "base");
                has_base = true;
            } else if (key == "terms") {
                for (const std::string& term : split(val, ';')) {
                    auto parts = split(term, ':');
                    if (parts.size() != 3)
                        throw std::invalid_argument(
                            "boundary spec: fourier term must be k:amp:phase, got '" + term + "'");
                    int k = static_cast<int>(parse_number(parts[0], "term k"));
                    terms.push_back({k, parse_number(parts[1], "term amp"),
                                     parse_number(parts[2], "term phase")});
                }
            } else {
                throw std::invalid_argument("boundary spec: unknown key '" + key + "' for fourier");
            }
        }
        if (!has_base) throw std::invalid_argument("boundary spec: fourier requires base");
        return std::make_shared<FourierBoundary>(base, std::move(terms));
    }

    throw std::invalid_argument("boundary spec: unknown kind '" + kind + "'");
}

}  // namespace magbill
