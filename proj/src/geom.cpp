#include "magbill/geom.hpp"

#include <cmath>
#include <string>

namespace magbill {

PlanarVector larmor_center(const PlanarVector& x, const PlanarVector& v, double r) {
    if (std::abs(v.norm() - 1.0) > 1e-9)
        throw InvalidVelocity("larmor_center: |v| = " + std::to_string(v.norm()));
    return x + r * rotate90(v);
}

PlanarVector velocity_from_center(const PlanarVector& c, const PlanarVector& x, double r) {
    PlanarVector d = x - c;
    if (std::abs(d.norm() - r) >= 1e-9)
        throw OffCircle("velocity_from_center: | |x-c| - r | = " + std::to_string(std::abs(d.norm() - r)));
    return rotate90(d).normalized();
}

PlanarVector parallel_point(const Boundary& b, double t, Side side, double r) {
    return b.eval(t) + side_sign(side) * r * rotate90(b.tangent(t));
}

double parallel_curvature(double k, double r, Side side) {
    if (side == Side::plus) {
        double denom = r * k - 1.0;
        if (std::abs(denom) < 1e-12)
            throw CuspSingularity("parallel_curvature: r*k = 1");
        return k / denom;
    }
    return k / (r * k + 1.0);
}

double min_curvature(const Boundary& b) { return b.min_curvature(); }

}  // namespace magbill
