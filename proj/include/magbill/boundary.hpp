#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "magbill/vec.hpp"

namespace magbill {

enum class Side { plus, minus };

inline double side_sign(Side s) { return s == Side::plus ? 1.0 : -1.0; }

// Closed strictly convex curve, traversed counterclockwise in a free periodic
// parameter (angle-like, not arclength).
class Boundary {
public:
    virtual ~Boundary() = default;

    virtual double period() const = 0;
    virtual PlanarVector eval(double t) const = 0;
    virtual PlanarVector tangent(double t) const = 0;  // unit, counterclockwise
    virtual double curvature(double t) const = 0;      // > 0
    virtual PlanarVector reference_point() const = 0;  // interior point

    // Star-shaped membership test about reference_point, bisection to 1e-12.
    bool inside(const PlanarVector& p) const;

    // Minimum of curvature over a 4096 grid, golden-section refined to 1e-10
    // relative accuracy.
    double min_curvature() const;

    struct ScanGrid {
        std::vector<double> t;        // n+1 values, t[n] = period
        std::vector<PlanarVector> p;  // eval at each t
        double max_chord = 0.0;       // largest distance between neighbors
    };

    // Cached equispaced sample grid (1024 intervals) shared by the root
    // scanners; immutable once built, safe to share across threads.
    const ScanGrid& scan_grid() const;

    static constexpr int scan_intervals = 1024;

private:
    void ensure_cache() const;

    mutable std::once_flag cache_once_;
    mutable ScanGrid grid_;
    mutable double min_curvature_ = 0.0;
};

class CircleBoundary final : public Boundary {
public:
    CircleBoundary(double d, PlanarVector center = {0.0, 0.0});

    double period() const override;
    PlanarVector eval(double t) const override;
    PlanarVector tangent(double t) const override;
    double curvature(double t) const override;
    PlanarVector reference_point() const override { return center_; }

    double radius() const { return d_; }
    PlanarVector center() const { return center_; }

private:
    double d_;
    PlanarVector center_;
};

class EllipseBoundary final : public Boundary {
public:
    EllipseBoundary(double a, double b);

    double period() const override;
    PlanarVector eval(double t) const override;
    PlanarVector tangent(double t) const override;
    double curvature(double t) const override;
    PlanarVector reference_point() const override { return {0.0, 0.0}; }

    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_, b_;
};

// Radial graph rho(theta) = base + sum amp*cos(k*theta + phase); construction
// rejects parameter sets whose curvature is not strictly positive.
class FourierBoundary final : public Boundary {
public:
    struct Term {
        int k;
        double amp;
        double phase;
    };

    FourierBoundary(double base, std::vector<Term> terms);

    double period() const override;
    PlanarVector eval(double t) const override;
    PlanarVector tangent(double t) const override;
    double curvature(double t) const override;
    PlanarVector reference_point() const override { return {0.0, 0.0}; }

private:
    double rho(double t) const;
    double drho(double t) const;
    double ddrho(double t) const;

    double base_;
    std::vector<Term> terms_;
};

// Parallel curve of a base boundary at distance r, itself a Boundary in the
// base parameter.  Side::plus requires r*k > 1 everywhere (the curve flips to
// the far side of the evolute and stays convex); Side::minus works for any r.
class OffsetBoundary final : public Boundary {
public:
    OffsetBoundary(std::shared_ptr<const Boundary> base, double r, Side side);

    double period() const override;
    PlanarVector eval(double t) const override;
    PlanarVector tangent(double t) const override;
    double curvature(double t) const override;
    PlanarVector reference_point() const override;

    const Boundary& base() const { return *base_; }
    double offset() const { return r_; }
    Side side() const { return side_; }

private:
    std::shared_ptr<const Boundary> base_;
    double r_;
    Side side_;
};

struct MagneticParams {
    double beta;  // field magnitude
    double r;     // Larmor radius, 1/beta

    explicit MagneticParams(double beta_);
    static MagneticParams from_radius(double r_);

    bool admissible(const Boundary& b) const;
};

// Parses a boundary spec string:
//   circle:d=<val>[,cx=<val>,cy=<val>]
//   ellipse:a=<val>,b=<val>
//   fourier:base=<val>,terms=<k>:<amp>:<phase>[;...]
// Throws std::invalid_argument on malformed input or a non-convex result.
std::shared_ptr<Boundary> parse_boundary(const std::string& spec);

}  // namespace magbill
