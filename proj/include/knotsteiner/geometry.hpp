#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "knotsteiner/error.hpp"
#include "knotsteiner/graph.hpp"
#include "knotsteiner/point.hpp"

namespace knotsteiner {

/// (r, theta, phi) with x = r sin(phi) cos(theta), y = r sin(phi) sin(theta),
/// z = r cos(phi). theta is the azimuth, phi the polar angle.
struct SphericalCoord {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

inline Point3 spherical_to_cartesian(const SphericalCoord& c) {
  const double s = std::sin(c.phi);
  return {c.r * s * std::cos(c.theta), c.r * s * std::sin(c.theta), c.r * std::cos(c.phi)};
}

/// Inverse of spherical_to_cartesian; theta in (-pi, pi], phi in [0, pi].
inline SphericalCoord cartesian_to_spherical(const Point3& p) {
  const double r = norm(p);
  if (r == 0.0) return {0.0, 0.0, 0.0};
  return {r, std::atan2(p.y, p.x), std::acos(std::clamp(p.z / r, -1.0, 1.0))};
}

struct Circle3 {
  Point3 center;
  double radius = 1.0;
  Point3 normal{0, 0, 1};

  bool valid(double tol = 1e-12) const {
    return radius > 0.0 && std::abs(norm(normal) - 1.0) <= tol && center.is_finite();
  }
};

struct Segment {
  Point3 a;
  Point3 b;
  double length() const { return distance(a, b); }
};

/// Angle at q between the arms q->p and q->r, in [0, pi].
inline double angle_at(const Point3& p, const Point3& q, const Point3& r) {
  const Point3 u = p - q, v = r - q;
  const double nu = norm(u), nv = norm(v);
  if (nu < 1e-12 || nv < 1e-12) throw Error(ErrorKind::DegenerateInput, "angle arm shorter than 1e-12");
  // atan2 form stays accurate near 0 and pi.
  return std::atan2(norm(cross(u, v)), dot(u, v));
}

inline double point_segment_distance(const Point3& p, const Segment& s) {
  const Point3 d = s.b - s.a;
  const double len2 = norm2(d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + t * d);
}

/// Hausdorff distance between two finite samples.
inline double hausdorff_distance(std::span<const Point3> a, std::span<const Point3> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::DegenerateInput, "hausdorff_distance of an empty sample");
  auto directed = [](std::span<const Point3> from, std::span<const Point3> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, norm2(p - q));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

inline std::vector<Point3> sample_circle(const Circle3& c, int count) {
  const Point3 u = any_orthogonal(c.normal);
  const Point3 v = cross(c.normal, u);
  std::vector<Point3> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * kPi * i / count;
    out.push_back(c.center + c.radius * (std::cos(t) * u + std::sin(t) * v));
  }
  return out;
}

/// Directed distance from the union of `from` to the union of `to`, sampling
/// each segment of `from` at `per_segment` interior points plus its ends.
inline double directed_segment_distance(std::span<const Segment> from, std::span<const Segment> to,
                                        int per_segment = 64) {
  double worst = 0.0;
  for (const auto& s : from) {
    for (int i = 0; i <= per_segment + 1; ++i) {
      const double t = static_cast<double>(i) / (per_segment + 1);
      const Point3 p = s.a + t * (s.b - s.a);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& o : to) best = std::min(best, point_segment_distance(p, o));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

/// Hausdorff distance between two unions of segments (sampled on each side,
/// exact point-to-segment distances to the other side).
inline double segment_set_distance(std::span<const Segment> a, std::span<const Segment> b, int per_segment = 64) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_segment_distance(a, b, per_segment), directed_segment_distance(b, a, per_segment));
}

/// Segments of a graph, skipping zero-length edges.
inline std::vector<Segment> graph_segments(const EmbeddedGraph& g, double min_length = 0.0) {
  std::vector<Segment> out;
  for (const auto& [i, j] : g.edges) {
    Segment s{g.vertices[i].xyz, g.vertices[j].xyz};
    if (s.length() > min_length) out.push_back(s);
  }
  return out;
}

/// Point of the circle closest to p. Throws NonuniqueMinimizer when p lies on
/// the circle's axis (every circle point is then equidistant).
inline Point3 closest_point_on_circle(const Point3& p, const Circle3& c) {
  const Point3 d = p - c.center;
  const Point3 radial = d - dot(d, c.normal) * c.normal;
  const double rho = norm(radial);
  if (rho < 1e-12) throw Error(ErrorKind::NonuniqueMinimizer, "point lies on the circle's axis");
  return c.center + (c.radius / rho) * radial;
}

namespace detail {

// Newton polish of the Fermat point inside the triangle's plane.
inline Point3 polish_fermat(const std::array<Point3, 3>& v, Point3 p) {
  const Point3 n = normalized(cross(v[1] - v[0], v[2] - v[0]));
  auto f = [&](const Point3& q) { return distance(q, v[0]) + distance(q, v[1]) + distance(q, v[2]); };
  for (int it = 0; it < 50; ++it) {
    double h[3][3] = {{n.x * n.x, n.x * n.y, n.x * n.z},
                      {n.y * n.x, n.y * n.y, n.y * n.z},
                      {n.z * n.x, n.z * n.y, n.z * n.z}};
    Point3 g;
    bool degenerate = false;
    for (const auto& q : v) {
      const Point3 d = p - q;
      const double r = norm(d);
      if (r < 1e-14) {
        degenerate = true;
        break;
      }
      const Point3 u = d / r;
      g += u;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) h[a][b] += ((a == b ? 1.0 : 0.0) - u[a] * u[b]) / r;
    }
    if (degenerate) break;
    g -= dot(g, n) * n;
    if (norm(g) < 1e-15) break;
    // 3x3 solve by Cramer's rule.
    const double det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
                       h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
                       h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    if (std::abs(det) < 1e-300) break;
    Point3 step;
    for (int col = 0; col < 3; ++col) {
      double m[3][3];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m[a][b] = (b == col) ? -g[a] : h[a][b];
      step[col] = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) /
                  det;
    }
    double t = 1.0;
    const double f0 = f(p);
    while (t > 1e-12 && f(p + t * step) > f0) t *= 0.5;
    if (t <= 1e-12) break;
    p += t * step;
    if (t * norm(step) < 1e-16) break;
  }
  return p;
}

}  // namespace detail

/// Fermat point of a triangle with all angles below 2pi/3.
inline Point3 fermat_point(const Point3& a, const Point3& b, const Point3& c) {
  const std::array<Point3, 3> v{a, b, c};
  const std::array<double, 3> side{distance(b, c), distance(a, c), distance(a, b)};
  const std::array<double, 3> ang{angle_at(b, a, c), angle_at(a, b, c), angle_at(a, c, b)};
  // Barycentric weights side / sin(angle + pi/3) of the first isogonic center.
  Point3 p;
  double wsum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double w = side[i] / std::sin(ang[i] + kPi / 3.0);
    p += w * v[i];
    wsum += w;
  }
  p = p / wsum;
  if (*std::max_element(ang.begin(), ang.end()) > kTwoThirdsPi - 1e-6) p = detail::polish_fermat(v, p);
  return p;
}

/// Minimal tree of three points: a two-edge path through a vertex whose angle
/// is at least 2pi/3, otherwise a triod around the Fermat point. Boundary
/// ties go to the two-edge tree.
inline EmbeddedGraph three_point_minimal_tree(const Point3& a, const Point3& b, const Point3& c) {
  const std::array<Point3, 3> v{a, b, c};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (distance(v[i], v[j]) < 1e-12) throw Error(ErrorKind::DegenerateInput, "coincident points");

  EmbeddedGraph g;
  for (int i = 0; i < 3; ++i) g.add_vertex(v[i], VertexRole::Terminal);

  const std::array<double, 3> ang{angle_at(b, a, c), angle_at(a, b, c), angle_at(a, c, b)};
  int obtuse = -1;
  for (int i = 0; i < 3; ++i)
    if (ang[i] >= kTwoThirdsPi - 1e-12 && (obtuse < 0 || ang[i] > ang[obtuse])) obtuse = i;

  if (obtuse >= 0) {
    for (int i = 0; i < 3; ++i)
      if (i != obtuse) g.edges.emplace_back(std::min(i, obtuse), std::max(i, obtuse));
  } else {
    const int s = g.add_vertex(fermat_point(a, b, c), VertexRole::Steiner);
    for (int i = 0; i < 3; ++i) g.edges.emplace_back(i, s);
  }
  g.update_length();
  return g;
}

/// Euclidean minimum spanning tree (Prim, O(n^2)).
inline EmbeddedGraph minimum_spanning_tree(std::span<const Point3> points) {
  EmbeddedGraph g;
  for (const auto& p : points) g.add_vertex(p, VertexRole::Terminal);
  const std::size_t n = points.size();
  if (n == 0) throw Error(ErrorKind::DegenerateInput, "minimum_spanning_tree of no points");
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> from(n, -1);
  std::vector<bool> in(n, false);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    int u = -1;
    for (std::size_t i = 0; i < n; ++i)
      if (!in[i] && (u < 0 || best[i] < best[u])) u = static_cast<int>(i);
    in[u] = true;
    if (from[u] >= 0) g.edges.emplace_back(std::min(u, from[u]), std::max(u, from[u]));
    for (std::size_t i = 0; i < n; ++i) {
      const double d = distance(points[u], points[i]);
      if (!in[i] && d < best[i]) {
        best[i] = d;
        from[i] = u;
      }
    }
  }
  g.update_length();
  return g;
}

/// Rotation matrix applied as a function; used for rigid-motion checks.
struct RigidMotion {
  std::array<std::array<double, 3>, 3> rot{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Point3 shift;

  Point3 operator()(const Point3& p) const {
    return {rot[0][0] * p.x + rot[0][1] * p.y + rot[0][2] * p.z + shift.x,
            rot[1][0] * p.x + rot[1][1] * p.y + rot[1][2] * p.z + shift.y,
            rot[2][0] * p.x + rot[2][1] * p.y + rot[2][2] * p.z + shift.z};
  }

  /// Rotation by `angle` about unit `axis` (Rodrigues), then a shift.
  static RigidMotion from_axis_angle(const Point3& axis, double angle, const Point3& shift = {}) {
    const Point3 k = normalized(axis);
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    RigidMotion m;
    m.rot = {{{t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y},
              {t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x},
              {t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c}}};
    m.shift = shift;
    return m;
  }
};

}  // namespace knotsteiner
