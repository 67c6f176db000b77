#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;

namespace {

// Weiszfeld iteration as an independent geometric-median oracle.
Point3 weiszfeld(const std::array<Point3, 3>& v) {
  Point3 p = (v[0] + v[1] + v[2]) / 3.0;
  for (int it = 0; it < 200000; ++it) {
    Point3 num;
    double den = 0.0;
    for (const auto& q : v) {
      const double r = std::max(distance(p, q), 1e-300);
      num += q / r;
      den += 1.0 / r;
    }
    const Point3 next = num / den;
    if (distance(next, p) < 1e-15) return next;
    p = next;
  }
  return p;
}

// Heron plus the Fermat length identity L^2 = (a^2+b^2+c^2)/2 + 2 sqrt3 Area.
double fermat_length(const Point3& a, const Point3& b, const Point3& c) {
  const double x = distance(b, c), y = distance(a, c), z = distance(a, b);
  const double s = (x + y + z) / 2;
  const double area = std::sqrt(std::max(0.0, s * (s - x) * (s - y) * (s - z)));
  return std::sqrt((x * x + y * y + z * z) / 2 + 2 * std::sqrt(3.0) * area);
}

}  // namespace

TEST(Geometry, SphericalRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const Point3 p{u(rng), u(rng), u(rng)};
    EXPECT_LT(distance(spherical_to_cartesian(cartesian_to_spherical(p)), p), 1e-12);
  }
}

TEST(Geometry, FermatPointMatchesWeiszfeld) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  while (checked < 100) {
    const Point3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
    if (std::max({angle_at(b, a, c), angle_at(a, b, c), angle_at(a, c, b)}) > kTwoThirdsPi - 0.05) continue;
    const Point3 f = fermat_point(a, b, c);
    EXPECT_LT(distance(f, weiszfeld({a, b, c})), 1e-8);
    const auto t = three_point_minimal_tree(a, b, c);
    EXPECT_NEAR(t.length, fermat_length(a, b, c), 1e-10);
    EXPECT_EQ(t.count(VertexRole::Steiner), 1u);
    ++checked;
  }
}

TEST(Geometry, SteinerAnglesAreTwoThirdsPi) {
  const Point3 a{0, 0, 0}, b{2, 0.3, 0.1}, c{0.7, 1.9, -0.4};
  const Point3 f = fermat_point(a, b, c);
  EXPECT_NEAR(angle_at(a, f, b), kTwoThirdsPi, 1e-10);
  EXPECT_NEAR(angle_at(b, f, c), kTwoThirdsPi, 1e-10);
  EXPECT_NEAR(angle_at(a, f, c), kTwoThirdsPi, 1e-10);
}

TEST(Geometry, ObtuseTriangleUsesTwoEdges) {
  const Point3 a{-1, 0, 0}, b{0, 0.2, 0}, c{1, 0, 0};
  const auto t = three_point_minimal_tree(a, b, c);
  EXPECT_EQ(t.count(VertexRole::Steiner), 0u);
  EXPECT_NEAR(t.length, distance(a, b) + distance(b, c), 1e-14);
}

TEST(Geometry, CoincidentPointsRejected) {
  EXPECT_THROW(three_point_minimal_tree({0, 0, 0}, {0, 0, 0}, {1, 0, 0}), Error);
}

TEST(Geometry, MinimumSpanningTreeMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Point3> p(5);
    for (auto& q : p) q = {u(rng), u(rng), u(rng)};
    // Kruskal over sorted edges, written out here.
    std::vector<std::tuple<double, int, int>> e;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) e.emplace_back(distance(p[i], p[j]), i, j);
    std::sort(e.begin(), e.end());
    std::vector<int> comp{0, 1, 2, 3, 4};
    double len = 0.0;
    for (const auto& [d, i, j] : e)
      if (comp[i] != comp[j]) {
        len += d;
        const int old = comp[j];
        for (auto& c : comp)
          if (c == old) c = comp[i];
      }
    EXPECT_NEAR(minimum_spanning_tree(p).length, len, 1e-12);
  }
}

TEST(Geometry, HausdorffOfIdenticalSetsIsZero) {
  const std::vector<Point3> a{{0, 0, 0}, {1, 0, 0}}, b{{1, 0, 0}, {0, 0, 0}};
  EXPECT_EQ(hausdorff_distance(a, b), 0.0);
  const std::vector<Point3> c{{0, 0, 0}, {1, 0, 0.5}};
  EXPECT_NEAR(hausdorff_distance(a, c), 0.5, 1e-15);
}

TEST(Geometry, ClosestPointOnCircle) {
  const Circle3 c{{0, 0, 0}, 1.0, {0, 0, 1}};
  const Point3 q = closest_point_on_circle({3, 4, 7}, c);
  EXPECT_LT(distance(q, {0.6, 0.8, 0}), 1e-14);
}

TEST(Geometry, RigidMotionPreservesDistance) {
  const auto m = RigidMotion::from_axis_angle({1, 2, 3}, 0.7, {4, -1, 2});
  const Point3 a{0.3, -0.2, 1.1}, b{-2, 0.5, 0.4};
  EXPECT_NEAR(distance(m(a), m(b)), distance(a, b), 1e-14);
}
