#pragma once

#include <array>
#include <cmath>

namespace cmorrey {

// Points live in R^n with n <= 3; unused trailing coordinates stay zero.
using Point = std::array<double, 3>;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

// x + t*u
inline Point along(const Point& x, double t, const Point& u) {
  return {x[0] + t * u[0], x[1] + t * u[1], x[2] + t * u[2]};
}

double sphere_surface_measure(int n);
double unit_ball_volume(int n);

}  // namespace cmorrey
