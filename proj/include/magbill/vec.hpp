#pragma once

#include <cmath>

namespace magbill {

struct PlanarVector {
    double x = 0.0;
    double y = 0.0;

    PlanarVector() = default;
    PlanarVector(double x_, double y_) : x(x_), y(y_) {}

    PlanarVector operator+(const PlanarVector& o) const { return {x + o.x, y + o.y}; }
    PlanarVector operator-(const PlanarVector& o) const { return {x - o.x, y - o.y}; }
    PlanarVector operator-() const { return {-x, -y}; }
    PlanarVector operator*(double s) const { return {x * s, y * s}; }
    PlanarVector operator/(double s) const { return {x / s, y / s}; }
    PlanarVector& operator+=(const PlanarVector& o) { x += o.x; y += o.y; return *this; }
    PlanarVector& operator-=(const PlanarVector& o) { x -= o.x; y -= o.y; return *this; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
    PlanarVector normalized() const { double n = norm(); return {x / n, y / n}; }
    double angle() const { return std::atan2(y, x); }
};

inline PlanarVector operator*(double s, const PlanarVector& v) { return v * s; }

inline double dot(const PlanarVector& a, const PlanarVector& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const PlanarVector& a, const PlanarVector& b) { return a.x * b.y - a.y * b.x; }

inline PlanarVector rotate90(const PlanarVector& w) { return {-w.y, w.x}; }

inline PlanarVector rotate(const PlanarVector& w, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * w.x - s * w.y, s * w.x + c * w.y};
}

}  // namespace magbill
