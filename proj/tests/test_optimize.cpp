#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;

namespace {

// Length of the minimal tree of three points, from side lengths alone.
double smt3(const Point3& a, const Point3& b, const Point3& c) {
  const double x = distance(b, c), y = distance(a, c), z = distance(a, b);
  auto ang = [](double opp, double s1, double s2) { return std::acos(std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0)); };
  if (ang(x, y, z) >= kTwoThirdsPi) return y + z;
  if (ang(y, x, z) >= kTwoThirdsPi) return x + z;
  if (ang(z, x, y) >= kTwoThirdsPi) return x + y;
  const double s = (x + y + z) / 2;
  const double area = std::sqrt(std::max(0.0, s * (s - x) * (s - y) * (s - z)));
  return std::sqrt((x * x + y * y + z * z) / 2 + 2 * std::sqrt(3.0) * area);
}

}  // namespace

TEST(Optimize, UnitSquareTwoSteinerPoints) {
  const std::vector<Point3> sq{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  const SteinerTopology t{4, 2, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}}};
  const auto r = optimize_fixed_topology(t, sq);
  EXPECT_NEAR(r.length, 1.0 + std::sqrt(3.0), 1e-10);
}

TEST(Optimize, RegularTetrahedronFullTopology) {
  // Two Steiner points on the common perpendicular of opposite edges; the
  // length follows from a one-variable minimization solved here by ternary search.
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Point3> v{{s, 0, -0.5}, {-s, 0, -0.5}, {0, s, 0.5}, {0, -s, 0.5}};
  auto len = [&](double z) {  // Steiner points at (0,0,-z) and (0,0,z)
    return 2 * std::hypot(s, 0.5 - z) + 2 * std::hypot(s, 0.5 - z) + 2 * z;
  };
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (len(m1) < len(m2)) hi = m2; else lo = m1;
  }
  const SteinerTopology t{4, 2, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}}};
  const auto r = optimize_fixed_topology(t, v);
  EXPECT_NEAR(r.length, len((lo + hi) / 2), 1e-9);
}

TEST(Optimize, RestartsAgree) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int inst = 0; inst < 5; ++inst) {
    std::vector<Point3> p(6);
    for (auto& q : p) q = {u(rng), u(rng), u(rng)};
    const auto tops = enumerate_full_topologies(6);
    const auto& t = tops[inst * 17 % tops.size()];
    double first = 0.0;
    for (int k = 0; k < 20; ++k) {
      std::vector<Point3> start(t.steiner);
      for (auto& q : start) q = {u(rng), u(rng), u(rng)};
      const auto r = optimize_fixed_topology(t, p, start);
      if (k == 0) first = r.length;
      EXPECT_NEAR(r.length, first, 1e-8) << "instance " << inst << " restart " << k;
    }
  }
}

TEST(Optimize, SlotOnCircleMatchesSweep) {
  const Continuum q = Continuum::circle("Q", {{0, 0, 0}, 1.0, {0, 0, 1}});
  const Point3 a{1.6, 0.4, 0.9}, b{1.4, -0.7, -0.8};
  FixedTopologyProblem p;
  p.fixed = {a, b};
  p.slots = {&q};
  p.steiner = 1;
  p.edges = {{0, 3}, {1, 3}, {2, 3}};
  FixedTopologyOptimizer opt(p);
  const auto r = opt.solve(std::nullopt);
  double best = 1e300, arg = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double th = 2 * kPi * i / 20000;
    const double l = smt3(a, b, {std::cos(th), std::sin(th), 0});
    if (l < best) best = l, arg = th;
  }
  double lo = arg - 1e-3, hi = arg + 1e-3;
  auto g = [&](double th) { return smt3(a, b, {std::cos(th), std::sin(th), 0}); };
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (g(m1) < g(m2)) hi = m2; else lo = m1;
  }
  EXPECT_NEAR(r.length, g((lo + hi) / 2), 1e-9);
  ASSERT_EQ(r.slot_params.size(), 1u);
  EXPECT_LT(q.project(r.positions[2]).distance, 1e-12);
}

TEST(Optimize, InvalidTopologiesRejected) {
  const std::vector<Point3> p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const SteinerTopology cycle{3, 1, {{0, 3}, {1, 3}, {2, 3}, {0, 1}}};
  EXPECT_THROW(optimize_fixed_topology(cycle, p), Error);
  const SteinerTopology wrong{4, 2, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}}};
  EXPECT_THROW(optimize_fixed_topology(wrong, p), Error);
}
