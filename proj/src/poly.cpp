#include "magbill/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "magbill/errors.hpp"

namespace magbill {

BivarPoly BivarPoly::constant(double c) { return monomial(0, 0, c); }

BivarPoly BivarPoly::monomial(int i, int j, double c) {
    BivarPoly p;
    p.add_coeff(i, j, c);
    return p;
}

void BivarPoly::ensure(int i, int j) {
    if (i >= static_cast<int>(c_.size())) c_.resize(i + 1);
    if (j >= static_cast<int>(c_[i].size())) c_[i].resize(j + 1, 0.0);
}

double BivarPoly::coeff(int i, int j) const {
    if (i < 0 || j < 0) return 0.0;
    if (i >= static_cast<int>(c_.size())) return 0.0;
    if (j >= static_cast<int>(c_[i].size())) return 0.0;
    return c_[i][j];
}

void BivarPoly::add_coeff(int i, int j, double c) {
    if (i < 0 || j < 0) throw std::invalid_argument("BivarPoly: negative exponent");
    if (i + j > max_degree) throw std::invalid_argument("BivarPoly: degree cap exceeded");
    ensure(i, j);
    c_[i][j] += c;
}

int BivarPoly::degree() const {
    int d = -1;
    for (int i = 0; i < static_cast<int>(c_.size()); ++i)
        for (int j = 0; j < static_cast<int>(c_[i].size()); ++j)
            if (c_[i][j] != 0.0) d = std::max(d, i + j);
    return d;
}

double BivarPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& row : c_)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

namespace {

template <typename T>
T eval_impl(const std::vector<std::vector<double>>& c, const T& x, const T& y) {
    T acc{};
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        T row{};
        for (int j = static_cast<int>(c[i].size()) - 1; j >= 0; --j) row = row * y + c[i][j];
        acc = acc * x + row;
    }
    return acc;
}

}  // namespace

double BivarPoly::eval(double x, double y) const { return eval_impl(c_, x, y); }

std::complex<double> BivarPoly::eval(const std::complex<double>& x,
                                     const std::complex<double>& y) const {
    return eval_impl(c_, x, y);
}

BivarPoly BivarPoly::derivative(int axis) const {
    BivarPoly out;
    for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
        for (int j = 0; j < static_cast<int>(c_[i].size()); ++j) {
            double v = c_[i][j];
            if (v == 0.0) continue;
            if (axis == 0) {
                if (i > 0) out.add_coeff(i - 1, j, v * i);
            } else {
                if (j > 0) out.add_coeff(i, j - 1, v * j);
            }
        }
    }
    return out;
}

BivarPoly BivarPoly::operator+(const BivarPoly& o) const {
    BivarPoly out = *this;
    for (int i = 0; i < static_cast<int>(o.c_.size()); ++i)
        for (int j = 0; j < static_cast<int>(o.c_[i].size()); ++j)
            if (o.c_[i][j] != 0.0) out.add_coeff(i, j, o.c_[i][j]);
    return out;
}

BivarPoly BivarPoly::operator-(const BivarPoly& o) const { return *this + o * -1.0; }

BivarPoly BivarPoly::operator*(const BivarPoly& o) const {
    BivarPoly out;
    for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
        for (int j = 0; j < static_cast<int>(c_[i].size()); ++j) {
            double v = c_[i][j];
            if (v == 0.0) continue;
            for (int k = 0; k < static_cast<int>(o.c_.size()); ++k) {
                for (int l = 0; l < static_cast<int>(o.c_[k].size()); ++l) {
                    double w = o.c_[k][l];
                    if (w == 0.0) continue;
                    out.add_coeff(i + k, j + l, v * w);
                }
            }
        }
    }
    return out;
}

BivarPoly BivarPoly::operator*(double s) const {
    BivarPoly out = *this;
    for (auto& row : out.c_)
        for (double& v : row) v *= s;
    return out;
}

BivarPoly BivarPoly::pow(int n) const {
    if (n < 0) throw std::invalid_argument("BivarPoly: negative power");
    BivarPoly out = constant(1.0);
    for (int i = 0; i < n; ++i) out = out * *this;
    return out;
}

BivarPoly BivarPoly::read(std::istream& in) {
    BivarPoly out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        int i, j;
        double c;
        if (!(ls >> i)) continue;  // blank line
        if (!(ls >> j >> c))
            throw std::invalid_argument("polynomial text: malformed line " + std::to_string(line_no));
        std::string extra;
        if (ls >> extra)
            throw std::invalid_argument("polynomial text: trailing tokens on line " +
                                        std::to_string(line_no));
        out.add_coeff(i, j, c);
    }
    return out;
}

BivarPoly BivarPoly::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("polynomial text: cannot open '" + path + "'");
    return read(in);
}

void BivarPoly::write(std::ostream& out) const {
    char buf[64];
    for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
        for (int j = 0; j < static_cast<int>(c_[i].size()); ++j) {
            if (c_[i][j] == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, j, c_[i][j]);
            out << buf;
        }
    }
}

UniPoly::UniPoly(std::vector<std::complex<double>> coeffs) : coeffs_(std::move(coeffs)) {
    double scale = 0.0;
    for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-13 * scale) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

std::complex<double> UniPoly::eval(const std::complex<double>& w) const {
    std::complex<double> acc = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) acc = acc * w + coeffs_[k];
    return acc;
}

namespace {

std::vector<std::complex<double>> companion_roots(const std::vector<std::complex<double>>& monic) {
    const int n = static_cast<int>(monic.size()) - 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -monic[i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(i);
    return roots;
}

}  // namespace

std::vector<std::complex<double>> uni_roots(const UniPoly& p) {
    const int n = p.degree();
    if (n < 1) throw NoRoots("uni_roots: degree < 1");

    double scale = 0.0;
    for (const auto& c : p.coeffs()) scale = std::max(scale, std::abs(c));
    const double accept = 1e-8 * scale;

    std::vector<std::complex<double>> monic(p.coeffs().begin(), p.coeffs().end() - 1);
    const std::complex<double> lead = p.coeffs().back();
    for (auto& c : monic) c /= lead;

    // Simultaneous iteration with the classic spiral start; residual-gated
    // with a companion-matrix fallback on stagnation.
    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc = 1.0;
    for (int k = 0; k < n; ++k) {
        acc *= seed;
        z[k] = acc;
    }

    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (int k = 0; k < n; ++k) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= z[k] - z[j];
            if (denom == 0.0) denom = 1e-30;
            std::complex<double> pz = 1.0;
            for (int i = n - 1; i >= 0; --i) pz = pz * z[k] + monic[i];
            std::complex<double> delta = pz / denom;
            z[k] -= delta;
            shift = std::max(shift, std::abs(delta) / (1.0 + std::abs(z[k])));
        }
        if (shift < 1e-15) break;
    }

    double worst = 0.0;
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(p.eval(z[k])));
    if (worst > accept) z = companion_roots(monic);

    worst = 0.0;
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(p.eval(z[k])));
    if (worst > accept)
        throw std::runtime_error("uni_roots: residual " + std::to_string(worst) +
                                 " above acceptance threshold");

    std::sort(z.begin(), z.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

std::vector<RootCluster> cluster_roots(const std::vector<std::complex<double>>& roots,
                                       double radius) {
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::complex<double> sum = roots[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - sum / static_cast<double>(count)) <= radius) {
                sum += roots[j];
                ++count;
                used[j] = true;
            }
        }
        clusters.push_back({sum / static_cast<double>(count), count});
    }
    return clusters;
}

double TrigPoly::eval(double theta) const {
    double v = 0.0;
    for (int k = 0; k < static_cast<int>(A.size()); ++k) {
        v += A[k] * std::cos(k * theta);
        if (k < static_cast<int>(B.size())) v += B[k] * std::sin(k * theta);
    }
    return v;
}

BivarPoly H_operator(const BivarPoly& F) {
    BivarPoly fx = F.derivative(0);
    BivarPoly fy = F.derivative(1);
    BivarPoly fxx = fx.derivative(0);
    BivarPoly fxy = fx.derivative(1);
    BivarPoly fyy = fy.derivative(1);
    return fxx * fy * fy - 2.0 * (fxy * fx * fy) + fyy * fx * fx;
}

BivarPoly homogeneous_part(const BivarPoly& F, int j) {
    BivarPoly out;
    int d = F.degree();
    for (int i = 0; i <= d; ++i) {
        for (int k = 0; i + k <= d; ++k) {
            if (i + k != j) continue;
            double v = F.coeff(i, k);
            if (v != 0.0) out.add_coeff(i, k, v);
        }
    }
    return out;
}

UniPoly leading_form(const BivarPoly& F) {
    int d = F.degree();
    if (d < 0) return UniPoly({std::complex<double>(0.0)});
    std::vector<std::complex<double>> coeffs(d + 1);
    for (int i = 0; i <= d; ++i) coeffs[i] = F.coeff(i, d - i);
    return UniPoly(std::move(coeffs));
}

TrigPoly fourier_restriction(const BivarPoly& F, const PlanarVector& center, double r, int K) {
    if (K < 0) throw std::invalid_argument("fourier_restriction: K must be >= 0");
    const int n = 4 * K + 4;
    std::vector<double> samples(n);
    for (int m = 0; m < n; ++m) {
        double theta = 2.0 * std::numbers::pi * m / n;
        samples[m] = F.eval(center.x + r * std::cos(theta), center.y + r * std::sin(theta));
    }
    TrigPoly out;
    out.A.assign(K + 1, 0.0);
    out.B.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double ca = 0.0, cb = 0.0;
        for (int m = 0; m < n; ++m) {
            double theta = 2.0 * std::numbers::pi * m / n;
            ca += samples[m] * std::cos(k * theta);
            cb += samples[m] * std::sin(k * theta);
        }
        out.A[k] = (k == 0 ? 1.0 : 2.0) * ca / n;
        out.B[k] = (k == 0 ? 0.0 : 2.0) * cb / n;
    }
    return out;
}

}  // namespace magbill
