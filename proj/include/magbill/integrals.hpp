#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/poly.hpp"
#include "magbill/vec.hpp"

namespace magbill {

// Polynomial in (x, v): sum over (k,l) of a_kl(x) v1^k v2^l.
class VelocityPoly {
public:
    VelocityPoly() = default;

    int N() const;
    bool empty() const { return terms_.empty(); }
    const std::map<std::pair<int, int>, BivarPoly>& terms() const { return terms_; }
    const BivarPoly* coeff(int k, int l) const;
    void add_term(int k, int l, const BivarPoly& p);
    void add_coeff(int k, int l, int i, int j, double c);

    double eval(const PlanarVector& x, const PlanarVector& v) const;

    static VelocityPoly read(std::istream& in);
    static VelocityPoly read_file(const std::string& path);
    void write(std::ostream& out) const;

private:
    std::map<std::pair<int, int>, BivarPoly> terms_;
};

VelocityPoly circle_integral(double beta);

VelocityPoly phi_from_F(const BivarPoly& F, double r);

struct PolyFit {
    BivarPoly F;
    double residual = 0.0;
    bool rank_deficient = false;
    BivarPoly null_direction;
};

PolyFit F_from_phi(const VelocityPoly& phi, double r,
                   const PlanarVector& box_lo, const PlanarVector& box_hi,
                   int oversample = 10, std::uint64_t seed = 1);

double invariance_residual(const BivarPoly& F, const Boundary& b,
                           const MagneticParams& params, int n_samples,
                           std::uint64_t seed, double* mean_out = nullptr);

struct CurveStats {
    double mean = 0.0;
    double max_dev = 0.0;
};

CurveStats boundary_constancy(const BivarPoly& F, const Boundary& b,
                              const MagneticParams& params, Side side,
                              int n_samples);

BivarPoly normalize_integral(const BivarPoly& F, double c1, double c2);

enum class GrazingCase { a, b };

struct GrazingPair {
    PlanarVector p_minus;
    PlanarVector p_plus;
};

GrazingPair grazing_centers(const Boundary& b, const MagneticParams& params,
                            double t, double eps, GrazingCase gc);

std::vector<PlanarVector> parallel_samples(const Boundary& b, double r,
                                           Side side, int n);

CurveStats rem3_residual(const BivarPoly& F,
                         const std::vector<PlanarVector>& samples, double beta);

struct Rem5Stats {
    double mean = 0.0;
    double max_dev = 0.0;
    bool nonzero = false;
};

Rem5Stats rem5_residual(const BivarPoly& f, const BivarPoly& g, int k,
                        double beta, const std::vector<PlanarVector>& samples);

struct Rem1Result {
    double ratio = 0.0;
    double eps3_coeff = 0.0;
    double predicted = 0.0;
    bool degenerate = false;
};

Rem1Result rem1_eps_check(const BivarPoly& F, const Boundary& b,
                          const MagneticParams& params, double t, GrazingCase gc,
                          const std::vector<double>& eps_ladder);

struct CheckReport {
    std::string check;
    long long samples = 0;
    double mean = 0.0;
    double max_abs_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

std::string check_report_json(const CheckReport& rep);

}  // namespace magbill
