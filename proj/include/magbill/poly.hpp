#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "magbill/vec.hpp"

namespace magbill {

// Dense bivariate polynomial with real coefficients, c[i][j] * x^i * y^j.
class BivarPoly {
public:
    static constexpr int max_degree = 64;

    BivarPoly() = default;

    static BivarPoly constant(double c);
    static BivarPoly monomial(int i, int j, double c);
    static BivarPoly var_x() { return monomial(1, 0, 1.0); }
    static BivarPoly var_y() { return monomial(0, 1, 1.0); }

    double coeff(int i, int j) const;
    void add_coeff(int i, int j, double c);

    // Largest i+j with a nonzero coefficient; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return degree() < 0; }
    double max_abs_coeff() const;

    double eval(double x, double y) const;
    double eval(const PlanarVector& p) const { return eval(p.x, p.y); }
    std::complex<double> eval(const std::complex<double>& x, const std::complex<double>& y) const;

    BivarPoly derivative(int axis) const;  // axis 0 = x, 1 = y

    BivarPoly operator+(const BivarPoly& o) const;
    BivarPoly operator-(const BivarPoly& o) const;
    BivarPoly operator*(const BivarPoly& o) const;
    BivarPoly operator*(double s) const;
    BivarPoly pow(int n) const;

    // One term per line, "i j coefficient"; '#' starts a comment; duplicate
    // terms are summed.
    static BivarPoly read(std::istream& in);
    static BivarPoly read_file(const std::string& path);
    void write(std::ostream& out) const;

private:
    void ensure(int i, int j);
    std::vector<std::vector<double>> c_;
};

inline BivarPoly operator*(double s, const BivarPoly& p) { return p * s; }

// Univariate polynomial with complex coefficients, coeffs[k] * w^k.  Trailing
// coefficients below 1e-13 of the largest magnitude are trimmed on
// construction.
class UniPoly {
public:
    explicit UniPoly(std::vector<std::complex<double>> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
    std::complex<double> eval(const std::complex<double>& w) const;

private:
    std::vector<std::complex<double>> coeffs_;
};

// All complex roots, degree entries, residual |p(root)| < 1e-8 * max|coeff|.
// Throws NoRoots for degree < 1.
std::vector<std::complex<double>> uni_roots(const UniPoly& p);

struct RootCluster {
    std::complex<double> value;
    int multiplicity;
};

// Groups roots lying within the given radius of each other.
std::vector<RootCluster> cluster_roots(const std::vector<std::complex<double>>& roots,
                                       double radius = 1e-6);

struct TrigPoly {
    std::vector<double> A;  // cosine coefficients, A[k] cos(k t)
    std::vector<double> B;  // sine coefficients, B[k] sin(k t); B[0] = 0

    int max_harmonic() const { return static_cast<int>(A.size()) - 1; }
    double eval(double theta) const;
};

// F_xx F_y^2 - 2 F_xy F_x F_y + F_yy F_x^2, as exact coefficient arithmetic.
BivarPoly H_operator(const BivarPoly& F);

// Terms of total degree j.
BivarPoly homogeneous_part(const BivarPoly& F, int j);

// Top-degree form f_d as a univariate polynomial in the ratio w = x/y,
// i.e. p(w) = f_d(w, 1).
UniPoly leading_form(const BivarPoly& F);

// Fourier coefficients of t -> F(center + r(cos t, sin t)) from >= 4K+4
// equispaced samples; exact for band-limited input.
TrigPoly fourier_restriction(const BivarPoly& F, const PlanarVector& center, double r, int K);

}  // namespace magbill
