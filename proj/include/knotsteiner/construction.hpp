#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "knotsteiner/continuum.hpp"
#include "knotsteiner/error.hpp"
#include "knotsteiner/geometry.hpp"
#include "knotsteiner/solver.hpp"

namespace knotsteiner {

struct ConstructionParams {
  double gamma = 0.1;
  double delta = 0.05;
  double eps = 0.05;

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::OutOfRange, "gamma must lie in (0,1)");
    if (!(delta > 0.0 && delta < kPi / 2)) throw Error(ErrorKind::OutOfRange, "delta must lie in (0,pi/2)");
    // t2 must land on the first constant-latitude piece, which spans pi/4 in theta.
    if (!(eps > 0.0 && eps < kPi / 4)) throw Error(ErrorKind::OutOfRange, "eps must lie in (0,pi/4)");
  }
  ConstructionParams halved() const { return {gamma / 2, delta / 2, eps / 2}; }
};

/// Labeled points of the construction, in insertion order.
struct NamedPointSet {
  std::vector<LabeledPoint> points;
  int chain_size = 0;  ///< n(eps); zero when no chain was sampled

  void add(std::string label, const Point3& p) { points.push_back({std::move(label), p}); }
  const Point3& operator[](const std::string& label) const {
    for (const auto& p : points)
      if (p.label == label) return p.xyz;
    throw Error(ErrorKind::OutOfRange, "no point labeled '" + label + "'");
  }
  bool contains(const std::string& label) const {
    for (const auto& p : points)
      if (p.label == label) return true;
    return false;
  }
};

inline const double kHalfSqrt3 = std::sqrt(3.0) / 2.0;

inline NamedPointSet hexagon_vertices() {
  NamedPointSet s;
  s.add("a1", {-0.5, 0.0, kHalfSqrt3});
  s.add("b1", {-1.0, 0.0, 0.0});
  s.add("c1", {-0.5, 0.0, -kHalfSqrt3});
  s.add("a2", {0.5, 0.0, -kHalfSqrt3});
  s.add("b2", {1.0, 0.0, 0.0});
  s.add("c2", {0.5, 0.0, kHalfSqrt3});
  return s;
}

inline Point3 hexagon_point(const std::string& label) { return hexagon_vertices()[label]; }

/// c1(g), c2(g) and the sphere points e_i (y > 0), f_i (y < 0) above and below them.
inline NamedPointSet split_points(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::OutOfRange, "gamma must lie in (0,1)");
  const double z = kHalfSqrt3 * (1.0 - gamma);
  const double y = std::sqrt(3.0 * gamma * (2.0 - gamma)) / 2.0;
  NamedPointSet s;
  s.add("c1g", {-0.5, 0.0, -z});
  s.add("c2g", {0.5, 0.0, z});
  s.add("e1", {-0.5, y, -z});
  s.add("f1", {-0.5, -y, -z});
  s.add("e2", {0.5, y, z});
  s.add("f2", {0.5, -y, z});
  return s;
}

/// The equator circle Q.
inline Circle3 circle_Q() { return {{0, 0, 0}, 1.0, {0, 0, 1}}; }

/// Horizontal circle on the sphere at height h.
inline Circle3 circle_Q_at(double h) { return {{0, 0, h}, std::sqrt(1.0 - h * h), {0, 0, 1}}; }

inline Point3 d1_point(double delta) { return spherical_to_cartesian({1.0, kPi, kPi / 2 - delta}); }
inline Point3 d2_point(double delta) { return spherical_to_cartesian({1.0, 0.0, kPi / 2 + delta}); }

/// M1..M5: from d1 along latitude pi/2-delta to 5pi/4, across to the equator
/// at 7pi/4, three quarters of the equator back to 5pi/4, across to latitude
/// pi/2+delta at 7pi/4, and along it to d2. Theta advances by 3pi in total.
inline std::vector<SphereArc> arc_M(double delta) {
  if (!(delta > 0.0 && delta < kPi / 2)) throw Error(ErrorKind::OutOfRange, "delta must lie in (0,pi/2)");
  using K = SphereArc::Kind;
  const double up = kPi / 2 - delta, eq = kPi / 2, down = kPi / 2 + delta;
  return {
      {{1, kPi, up}, {1, 5 * kPi / 4, up}, K::ConstantLatitude, +1},
      {{1, 5 * kPi / 4, up}, {1, 7 * kPi / 4, eq}, K::GreatCircle, +1},
      {{1, 7 * kPi / 4, eq}, {1, 5 * kPi / 4, eq}, K::ConstantLatitude, +1},
      {{1, 5 * kPi / 4, eq}, {1, 7 * kPi / 4, down}, K::GreatCircle, +1},
      {{1, 7 * kPi / 4, down}, {1, 2 * kPi, down}, K::ConstantLatitude, +1},
  };
}

inline Continuum continuum_M(double delta) { return Continuum::path("M", arc_M(delta)); }

/// Closed form of |M(delta)|: two quarter-turn latitude arcs, two quarter great
/// circles and three quarters of the equator.
inline double arc_M_length(double delta) { return (kPi / 2) * std::cos(delta) + 5 * kPi / 2; }

/// t1..tn: t1, t2 straddle d1, t_{n-1}, t_n straddle d2, and t2..t_{n-1} are
/// uniform in arclength along M with step at most 0.9 eps.
inline NamedPointSet sample_chain(double delta, double eps) {
  ConstructionParams{0.5, delta, eps}.validate();
  const Continuum m = continuum_M(delta);
  const double len = m.length();
  const double lat = std::cos(delta);  // radius of the two latitude circles
  const double s0 = eps * lat, s1 = len - eps * lat;
  const int intervals = static_cast<int>(std::ceil((s1 - s0) / (0.9 * eps)));
  NamedPointSet s;
  const int n = intervals + 3;
  s.add("t1", spherical_to_cartesian({1.0, kPi - eps, kPi / 2 - delta}));
  for (int i = 0; i <= intervals; ++i) {
    Point3 p;
    if (i == 0) {
      p = spherical_to_cartesian({1.0, kPi + eps, kPi / 2 - delta});
    } else if (i == intervals) {
      p = spherical_to_cartesian({1.0, -eps, kPi / 2 + delta});
    } else {
      p = m.point_at(s0 + (s1 - s0) * i / intervals);
    }
    s.add("t" + std::to_string(i + 2), p);
  }
  s.add("t" + std::to_string(n), spherical_to_cartesian({1.0, eps, kPi / 2 + delta}));
  s.chain_size = n;
  return s;
}

/// X = {a1,e1,f1,a2,e2,f2,t1..tn}.
inline TerminalSet build_X(const ConstructionParams& p) {
  p.validate();
  const auto hex = hexagon_vertices();
  const auto sp = split_points(p.gamma);
  TerminalSet x;
  x.points.push_back({"a1", hex["a1"]});
  x.points.push_back({"e1", sp["e1"]});
  x.points.push_back({"f1", sp["f1"]});
  x.points.push_back({"a2", hex["a2"]});
  x.points.push_back({"e2", sp["e2"]});
  x.points.push_back({"f2", sp["f2"]});
  for (const auto& t : sample_chain(p.delta, p.eps).points) x.points.push_back(t);
  return x;
}

inline int chain_size(const TerminalSet& x) { return static_cast<int>(x.points.size()) - 6; }

/// Every named object of the construction for the given parameters.
inline NamedPointSet named_points(const ConstructionParams& p) {
  p.validate();
  NamedPointSet s = hexagon_vertices();
  for (const auto& q : split_points(p.gamma).points) s.points.push_back(q);
  s.add("d1", d1_point(p.delta));
  s.add("d2", d2_point(p.delta));
  s.add("b4", {0, 1, 0});
  s.add("b5", {0, -1, 0});
  const auto chain = sample_chain(p.delta, p.eps);
  for (const auto& q : chain.points) s.points.push_back(q);
  s.chain_size = chain.chain_size;
  return s;
}

/// Clusters around the two ends of the chain and the chain between them.
inline ClusterSpec default_cluster_spec(int n) {
  const std::string tn1 = "t" + std::to_string(n - 1), tn = "t" + std::to_string(n);
  ClusterSpec spec;
  spec.clusters = {{"a1", "t1", "t2", "e1", "f1"}, {"a2", tn1, tn, "e2", "f2"}};
  for (int i = 2; i <= n - 1; ++i) spec.chain.push_back("t" + std::to_string(i));
  return spec;
}

}  // namespace knotsteiner
