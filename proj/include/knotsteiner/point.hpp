#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace knotsteiner {

/// Default tolerance for geometric assertions.
inline constexpr double kGeomTol = 1e-9;
/// Default tolerance for convergence residuals.
inline constexpr double kResidualTol = 1e-12;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoThirdsPi = 2.0 * kPi / 3.0;

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Point3() = default;
  constexpr Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Point3& operator+=(const Point3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Point3& operator-=(const Point3& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Point3& operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Point3 operator+(Point3 a, const Point3& b) { return a += b; }
constexpr Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
constexpr Point3 operator-(const Point3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Point3 operator*(Point3 a, double s) { return a *= s; }
constexpr Point3 operator*(double s, Point3 a) { return a *= s; }
constexpr Point3 operator/(Point3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Point3& a) { return dot(a, a); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

inline Point3 normalized(const Point3& a) { return a / norm(a); }

/// Coordinate-free comparison; exact equality is never used for points.
inline bool approx_equal(const Point3& a, const Point3& b, double tol = kGeomTol) {
  return distance(a, b) <= tol;
}

inline std::ostream& operator<<(std::ostream& os, const Point3& p) {
  return os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
}

/// Any unit vector orthogonal to `n` (n must be nonzero).
inline Point3 any_orthogonal(const Point3& n) {
  const Point3 trial = std::abs(n.x) < 0.9 ? Point3{1, 0, 0} : Point3{0, 1, 0};
  return normalized(cross(n, trial));
}

}  // namespace knotsteiner
