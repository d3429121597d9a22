#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/geom.hpp"
#include "magbill/rng.hpp"

namespace magbill {

struct LarmorState {
    PlanarVector x;  // inside or on the boundary
    PlanarVector v;  // unit
    MagneticParams params;

    PlanarVector center() const { return larmor_center(x, v, params.r); }
};

struct HitResult {
    double t;          // boundary parameter of the exit point
    PlanarVector q;    // exit point
    double arc_angle;  // swept counterclockwise from x, in (0, 2*pi]
};

// Exit point of the counterclockwise Larmor circle of the state: among the
// parameters with |eval(t) - c| = r, the one whose circle velocity points
// outward; found by a 1024-interval scan plus bracket refinement to 1e-12.
// Throws NoImpact / GrazingImpact.
HitResult next_hit(const LarmorState& state, const Boundary& b);

// v - 2<n,v>n.
PlanarVector reflect(const PlanarVector& v, const PlanarVector& n);

// Flight to the boundary plus specular reflection.
LarmorState billiard_step(const LarmorState& state, const Boundary& b);

struct CenterStep {
    PlanarVector next;
    bool fixed = false;  // within 1e-9 of a parallel curve: the map acts as identity
    double t_impact = 0.0;
    PlanarVector q;
    PlanarVector v_in;
    PlanarVector v_out;
    double tangential = 0.0;  // <v_out, tangent at q>
};

// One application of the map on Larmor centers, with the impact data exposed.
CenterStep center_step(const PlanarVector& P, const Boundary& b, const MagneticParams& params);

// Center P -> reflected center; identity within 1e-9 of either parallel curve.
PlanarVector center_map_M(const PlanarVector& P, const Boundary& b, const MagneticParams& params);

struct OrbitRecord {
    int step = 0;
    double t_impact = 0.0;
    PlanarVector q;
    PlanarVector v_in;
    PlanarVector v_out;
    PlanarVector center_before;
    PlanarVector center_after;
    double arc_angle = 0.0;
    double integral_value = 0.0;
    bool ok = true;
    std::string error;
};

// n_steps records; truncated at the first error with a flagged final record.
std::vector<OrbitRecord> orbit(const LarmorState& start, const Boundary& b, int n_steps);

// 2*arccos((rho^2 + d^2 - r^2) / (2 rho d)) in [0, 2*pi].
// Throws OutsideAnnulus when rho is outside [r-d, r+d].
double rotation_angle_circle(double d, double r, double rho);

// Average polar-angle advance per step about the given point, each advance
// taken in [0, 2*pi), divided by 2*pi.  Throws NotAnnular when a center gets
// too close to the reference point for the angle to be meaningful.
double rotation_number_estimate(const std::vector<PlanarVector>& centers,
                                const PlanarVector& about);

struct LyapunovResult {
    double lambda = 0.0;
    double stderr_est = 0.0;
    int steps_used = 0;
    bool complete = true;
};

// Largest Lyapunov exponent of the center map by two-trajectory tangent
// propagation: offset 1e-7, renormalized every step; standard error over
// block averages.  A truncated orbit yields a flagged partial estimate.
LyapunovResult lyapunov_estimate(const PlanarVector& P, const Boundary& b,
                                 const MagneticParams& params, int n_iters, std::uint64_t seed);

struct PortraitPoint {
    int orbit_id = 0;
    int step = 0;
    PlanarVector c;
    double t_impact = 0.0;
    double tangential = 0.0;
};

struct Portrait {
    std::vector<PortraitPoint> points;
    std::vector<std::string> orbit_errors;  // one entry per orbit, empty when clean
};

Portrait phase_portrait(const Boundary& b, const MagneticParams& params, int n_seeds, int n_iters,
                        std::uint64_t seed);

// Distance extremes from P to the boundary curve, golden-refined.
struct DistanceProbe {
    double dmin;
    double dmax;
};
DistanceProbe probe_boundary_distance(const Boundary& b, const PlanarVector& P);

// True when the circle of radius r about P crosses the boundary transversally
// with at least the given clearance on both sides.
bool in_phase_annulus(const Boundary& b, double r, const PlanarVector& P, double margin);

// Rejection-samples a point of the phase annulus with the given clearance.
PlanarVector sample_phase_annulus(const Boundary& b, double r, double margin, SplitMix64& rng);

}  // namespace magbill
