#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "knotsteiner/error.hpp"
#include "knotsteiner/geometry.hpp"

namespace knotsteiner {

/// Arc of a circle: points center + radius (cos a * ref + sin a * (normal x ref))
/// for a in [start, start + sweep]. sweep == 2pi means the full circle.
struct CircleArc {
  Point3 center;
  double radius = 1.0;
  Point3 normal{0, 0, 1};
  Point3 ref{1, 0, 0};
  double start = 0.0;
  double sweep = 2.0 * kPi;

  bool full() const { return sweep >= 2.0 * kPi - 1e-15; }
  double length() const { return radius * sweep; }

  Point3 at_angle(double a) const {
    const Point3 v = cross(normal, ref);
    return center + radius * (std::cos(a) * ref + std::sin(a) * v);
  }
  Point3 tangent_at_angle(double a) const {
    const Point3 v = cross(normal, ref);
    return -std::sin(a) * ref + std::cos(a) * v;
  }
  Point3 begin_point() const { return at_angle(start); }
  Point3 end_point() const { return at_angle(start + sweep); }

  static CircleArc from_circle(const Circle3& c) {
    CircleArc a;
    a.center = c.center;
    a.radius = c.radius;
    a.normal = normalized(c.normal);
    a.ref = any_orthogonal(a.normal);
    return a;
  }
};

/// Closest point of a continuum piece together with its local parameter.
struct ArcProjection {
  Point3 point;
  double offset = 0.0;  ///< arclength from the arc's start
  bool interior = true; ///< false when clamped to an arc endpoint
  double distance = 0.0;
};

inline ArcProjection project_onto_arc(const CircleArc& arc, const Point3& p) {
  const Point3 d = p - arc.center;
  const Point3 radial = d - dot(d, arc.normal) * arc.normal;
  const double rho = norm(radial);
  const Point3 v = cross(arc.normal, arc.ref);
  // On the axis every point of a full circle is closest; pick angle 0.
  const double ang = rho < 1e-300 ? 0.0 : std::atan2(dot(radial, v), dot(radial, arc.ref));
  double rel = std::fmod(ang - arc.start, 2.0 * kPi);
  if (rel < 0) rel += 2.0 * kPi;
  if (arc.full() || rel <= arc.sweep) {
    const Point3 q = arc.at_angle(arc.start + rel);
    return {q, arc.radius * rel, true, distance(p, q)};
  }
  const Point3 a0 = arc.begin_point(), a1 = arc.end_point();
  const double d0 = distance(p, a0), d1 = distance(p, a1);
  if (d0 <= d1) return {a0, 0.0, false, d0};
  return {a1, arc.length(), false, d1};
}

/// Arc of the unit sphere between two points, either along a circle of
/// constant polar angle or along the shorter great circle.
struct SphereArc {
  enum class Kind { ConstantLatitude, GreatCircle };
  SphericalCoord start;
  SphericalCoord end;
  Kind kind = Kind::GreatCircle;
  /// For constant-latitude arcs, +1 sweeps theta upward from start to end.
  int orientation = +1;

  CircleArc to_circle_arc() const {
    const Point3 s = spherical_to_cartesian(start), e = spherical_to_cartesian(end);
    CircleArc a;
    if (kind == Kind::ConstantLatitude) {
      if (std::abs(start.phi - end.phi) > 1e-12)
        throw Error(ErrorKind::DegenerateInput, "constant-latitude arc with differing polar angles");
      a.center = {0, 0, std::cos(start.phi)};
      a.radius = std::sin(start.phi);
      a.normal = orientation > 0 ? Point3{0, 0, 1} : Point3{0, 0, -1};
      a.ref = {1, 0, 0};
      // angle measured about `normal`; theta for +z, -theta for -z.
      const double a0 = orientation > 0 ? start.theta : -start.theta;
      const double a1 = orientation > 0 ? end.theta : -end.theta;
      double sweep = std::fmod(a1 - a0, 2.0 * kPi);
      if (sweep <= 0) sweep += 2.0 * kPi;
      a.start = a0;
      a.sweep = sweep;
    } else {
      const Point3 n = cross(s, e);
      if (norm(n) < 1e-12) throw Error(ErrorKind::DegenerateInput, "great-circle arc between antipodal or equal points");
      a.center = {0, 0, 0};
      a.radius = 1.0;
      a.normal = normalized(n);
      a.ref = normalized(s);
      a.start = 0.0;
      a.sweep = std::atan2(norm(cross(s, e)), dot(s, e));
    }
    return a;
  }

  double length() const { return to_circle_arc().length(); }
};

/// A continuum terminal: a chain of circle arcs (a single full circle for Q).
/// The parameter of a point is its arclength from the beginning of the chain.
struct Continuum {
  std::string label;
  std::vector<CircleArc> pieces;

  static Continuum circle(std::string label, const Circle3& c) {
    return {std::move(label), {CircleArc::from_circle(c)}};
  }
  static Continuum path(std::string label, const std::vector<SphereArc>& arcs) {
    Continuum out{std::move(label), {}};
    for (const auto& a : arcs) out.pieces.push_back(a.to_circle_arc());
    return out;
  }

  double length() const {
    double s = 0.0;
    for (const auto& p : pieces) s += p.length();
    return s;
  }

  bool closed() const { return pieces.size() == 1 && pieces.front().full(); }

  struct Projection {
    Point3 point;
    double param = 0.0;
    double distance = 0.0;
    int piece = 0;
    bool interior = true;
  };

  Projection project(const Point3& p) const {
    Projection best;
    best.distance = std::numeric_limits<double>::infinity();
    double offset = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto pr = project_onto_arc(pieces[i], p);
      if (pr.distance < best.distance) {
        best = {pr.point, offset + pr.offset, pr.distance, static_cast<int>(i), pr.interior};
        // A clamp at an inner joint is interior to the chain.
        if (!pr.interior) {
          const bool at_chain_start = (i == 0 && pr.offset == 0.0);
          const bool at_chain_end = (i + 1 == pieces.size() && pr.offset > 0.0);
          best.interior = !(at_chain_start || at_chain_end);
        }
      }
      offset += pieces[i].length();
    }
    return best;
  }

  Point3 point_at(double param) const {
    double offset = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double len = pieces[i].length();
      if (param <= offset + len || i + 1 == pieces.size()) {
        const double local = std::clamp(param - offset, 0.0, len);
        return pieces[i].at_angle(pieces[i].start + local / pieces[i].radius);
      }
      offset += len;
    }
    return pieces.back().end_point();
  }

  /// Unit tangent in the direction of increasing parameter.
  Point3 tangent_at(double param) const {
    double offset = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double len = pieces[i].length();
      if (param <= offset + len || i + 1 == pieces.size()) {
        const double local = std::clamp(param - offset, 0.0, len);
        return pieces[i].tangent_at_angle(pieces[i].start + local / pieces[i].radius);
      }
      offset += len;
    }
    return pieces.back().tangent_at_angle(pieces.back().start + pieces.back().sweep);
  }

  std::vector<Point3> sample(int count) const {
    std::vector<Point3> out;
    const double len = length();
    const int n = closed() ? count : count - 1;
    for (int i = 0; i < count; ++i) out.push_back(point_at(len * i / std::max(n, 1)));
    return out;
  }

  bool contains(const Point3& p, double tol = kGeomTol) const { return project(p).distance <= tol; }
};

/// Smoothed distance sqrt(D^2 + mu^2) from w to a continuum, where D is the
/// distance to the closest point, with its gradient and Hessian in w.
struct DistanceTerm {
  double value = 0.0;
  Point3 grad;
  std::array<std::array<double, 3>, 3> hess{};
  Point3 closest;
  double param = 0.0;
};

inline DistanceTerm smoothed_distance(const Continuum& c, const Point3& w, double mu) {
  DistanceTerm t;
  const auto pr = c.project(w);
  t.closest = pr.point;
  t.param = pr.param;
  const Point3 diff = w - pr.point;
  const double f = std::sqrt(norm2(diff) + mu * mu);
  t.value = f;
  t.grad = diff / f;
  // Half Hessian of D^2: identity for a clamped endpoint, otherwise
  // r r^T + (rho - R)/rho (P - r r^T) + n n^T with P the in-plane projector.
  std::array<std::array<double, 3>, 3> h2{};
  const CircleArc& arc = c.pieces[pr.piece];
  const Point3 d = w - arc.center;
  const double hgt = dot(d, arc.normal);
  const Point3 radial = d - hgt * arc.normal;
  const double rho = norm(radial);
  const bool on_circle = pr.distance > 0.0 && rho > 1e-12 && [&] {
    // interior of the piece (not clamped to an endpoint)
    const auto local = project_onto_arc(arc, w);
    return local.interior;
  }();
  if (on_circle) {
    const Point3 r = radial / rho;
    const Point3& n = arc.normal;
    const double k = (rho - arc.radius) / rho;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double pab = (a == b ? 1.0 : 0.0) - n[a] * n[b];
        h2[a][b] = r[a] * r[b] + k * (pab - r[a] * r[b]) + n[a] * n[b];
      }
  } else {
    for (int a = 0; a < 3; ++a) h2[a][a] = 1.0;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t.hess[a][b] = h2[a][b] / f - diff[a] * diff[b] / (f * f * f);
  return t;
}

}  // namespace knotsteiner
