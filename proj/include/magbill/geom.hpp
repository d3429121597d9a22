#pragma once

#include "magbill/boundary.hpp"
#include "magbill/errors.hpp"
#include "magbill/vec.hpp"

namespace magbill {

// Center of the Larmor circle through x with unit velocity v: x + r*J*v.
// Throws InvalidVelocity when |v| is off unity by more than 1e-9.
PlanarVector larmor_center(const PlanarVector& x, const PlanarVector& v, double r);

// Inverse of larmor_center at a fixed base point: the counterclockwise unit
// tangent of the circle about c at x.  Throws OffCircle when ||x-c|-r| >= 1e-9.
PlanarVector velocity_from_center(const PlanarVector& c, const PlanarVector& x, double r);

// gamma(t) + sign*r*J*tau(t); at distance exactly r from gamma(t).
PlanarVector parallel_point(const Boundary& b, double t, Side side, double r);

// k/(r*k-1) for Side::plus, k/(r*k+1) for Side::minus.
// Throws CuspSingularity when r*k = 1 on the plus side.
double parallel_curvature(double k, double r, Side side);

double min_curvature(const Boundary& b);

}  // namespace magbill
