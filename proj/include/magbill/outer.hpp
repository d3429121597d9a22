#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/vec.hpp"

namespace magbill {

enum class Orientation { clockwise, counterclockwise };

// Center of the Larmor circle tangent to gamma at gamma(s), traversed with the
// given orientation: gamma(s) + sigma*r*J*tau(s) with tau the boundary's
// counterclockwise tangent, sigma = +1 counterclockwise, -1 clockwise.
PlanarVector tangent_center(const Boundary& gamma, double s, Orientation orientation, double r);

// Outer billiard configuration; caches the tangent-center curve for root
// scanning.  The counterclockwise case requires 1/r below the minimum
// curvature of gamma.
class OuterConfig {
public:
    OuterConfig(std::shared_ptr<const Boundary> gamma, Orientation orientation, double r);

    const Boundary& gamma() const { return *gamma_; }
    Orientation orientation() const { return orientation_; }
    double r() const { return r_; }
    double sigma() const { return orientation_ == Orientation::counterclockwise ? 1.0 : -1.0; }

    PlanarVector center_at(double s) const;

    const std::vector<double>& s_grid() const { return s_grid_; }
    const std::vector<PlanarVector>& o_grid() const { return o_grid_; }

private:
    std::shared_ptr<const Boundary> gamma_;
    Orientation orientation_;
    double r_;
    std::vector<double> s_grid_;
    std::vector<PlanarVector> o_grid_;
};

struct OuterStep {
    PlanarVector next;
    double s_tangency = 0.0;
    PlanarVector o;          // Larmor center used
    bool fixed = false;      // P on the annulus boundary, map acts as identity
};

// One application of the outer map: finds the tangent Larmor circle through P
// whose oriented arc from P to the tangency point is at most a half turn (the
// smallest such arc), and reflects P across the line through the center and
// the tangency point.  Throws NoTangency when no tangent circle passes
// through P.
OuterStep outer_step_full(const PlanarVector& P, const OuterConfig& config);

PlanarVector outer_step(const PlanarVector& P, const OuterConfig& config);

// Builds the outer map on the inner parallel curve of the boundary
// (counterclockwise) and returns the max |T(P) - M(P)| over n_samples random
// centers in the phase annulus, margin 1e-3 from its boundary.
double equivalence_check(const std::shared_ptr<const Boundary>& gamma, const MagneticParams& params,
                         int n_samples, std::uint64_t seed, double* mean_out = nullptr);

}  // namespace magbill
