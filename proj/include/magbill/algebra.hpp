#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "magbill/poly.hpp"
#include "magbill/vec.hpp"

namespace magbill {

BivarPoly ellipse_offset_poly(double a, double b, double r);

double offset_vanishing_check(double a, double b, double r, int n_samples);

struct ComplexPoint {
    std::complex<double> x;
    std::complex<double> y;
};

std::vector<ComplexPoint> ellipse_offset_singular_points(double a, double b, double r);

std::vector<ComplexPoint> singular_search(const BivarPoly& f, int n_starts,
                                          std::uint64_t seed, double box = 15.0);

double implicit_curvature(const BivarPoly& f, const PlanarVector& p);

struct InfinityPoint {
    std::complex<double> ratio;  // direction (x:y) = (ratio:1)
    int multiplicity = 0;
    bool isotropic = false;
    bool tangency = false;
    bool y_zero_direction = false;  // direction (1:0); ratio unused
};

std::vector<InfinityPoint> infinity_report(const BivarPoly& f);

enum class Verdict {
    no_obstruction,
    obstructed_affine_singularity,
    obstructed_transversal_infinity,
};

std::string verdict_name(Verdict v);

struct ObstructionReport {
    Verdict verdict = Verdict::no_obstruction;
    std::vector<ComplexPoint> affine_singular;
    std::vector<InfinityPoint> infinity;
};

ObstructionReport obstruction_report(const BivarPoly& f, int search_budget,
                                     std::uint64_t seed);

ObstructionReport ellipse_obstruction_report(double a, double b, double r,
                                             int search_budget, std::uint64_t seed);

std::string obstruction_report_json(const ObstructionReport& rep);

struct RScanEntry {
    double r = 0.0;
    bool certified = false;
    std::string detail;
};

std::vector<RScanEntry> r_scan(double a, double b, const std::vector<double>& r_grid);

}  // namespace magbill
