#include <cmath>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;

namespace {

// Arclength of M by dense chords along the path traced in (theta, phi).
double chord_length_of_M(double delta, int per_piece = 200000) {
  const double up = kPi / 2 - delta, eq = kPi / 2, down = kPi / 2 + delta;
  struct Leg {
    double t0, p0, t1, p1;
    bool great;
  };
  const Leg legs[] = {{kPi, up, 5 * kPi / 4, up, false},
                      {5 * kPi / 4, up, 7 * kPi / 4, eq, true},
                      {7 * kPi / 4, eq, 13 * kPi / 4, eq, false},
                      {5 * kPi / 4, eq, 7 * kPi / 4, down, true},
                      {7 * kPi / 4, down, 2 * kPi, down, false}};
  double total = 0.0;
  for (const auto& l : legs) {
    auto at = [&](double s) -> Point3 {
      if (!l.great) return spherical_to_cartesian({1.0, l.t0 + s * (l.t1 - l.t0), l.p0});
      // Slerp between the endpoints.
      const Point3 a = spherical_to_cartesian({1.0, l.t0, l.p0}), b = spherical_to_cartesian({1.0, l.t1, l.p1});
      const double w = std::acos(std::clamp(dot(a, b), -1.0, 1.0));
      return (std::sin((1 - s) * w) * a + std::sin(s * w) * b) / std::sin(w);
    };
    Point3 prev = at(0.0);
    for (int i = 1; i <= per_piece; ++i) {
      const Point3 cur = at(double(i) / per_piece);
      total += distance(prev, cur);
      prev = cur;
    }
  }
  return total;
}

}  // namespace

TEST(Construction, HexagonOnUnitCircle) {
  const auto h = hexagon_vertices();
  ASSERT_EQ(h.points.size(), 6u);
  for (const auto& p : h.points) EXPECT_NEAR(norm(p.xyz), 1.0, 1e-15);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(distance(h.points[i].xyz, h.points[(i + 1) % 6].xyz), 1.0, 1e-15);
}

TEST(Construction, SplitPointsOnSphereAboveAndBelow) {
  for (double g : {0.02, 0.1, 0.5}) {
    const auto s = split_points(g);
    for (const char* l : {"e1", "f1", "e2", "f2"}) EXPECT_NEAR(norm(s[l]), 1.0, 1e-14) << l;
    EXPECT_NEAR(s["e1"].y, -s["f1"].y, 1e-15);
    EXPECT_GT(s["e2"].y, 0.0);
    EXPECT_NEAR(s["c2g"].z, std::sqrt(3.0) / 2 * (1 - g), 1e-15);
  }
  EXPECT_THROW(split_points(0.0), Error);
  EXPECT_THROW(split_points(1.0), Error);
}

TEST(Construction, ArcMLengthMatchesChordSum) {
  for (double delta : {0.05, 0.2}) {
    const double chords = chord_length_of_M(delta);
    EXPECT_NEAR(arc_M_length(delta), chords, 1e-8);
    EXPECT_NEAR(continuum_M(delta).length(), chords, 1e-8);
  }
  EXPECT_NEAR(arc_M_length(0.05), 9.4228148743883, 1e-12);
}

TEST(Construction, ArcMIsContinuousAndOnTheSphere) {
  const auto m = continuum_M(0.05);
  for (std::size_t i = 0; i + 1 < m.pieces.size(); ++i)
    EXPECT_LT(distance(m.pieces[i].end_point(), m.pieces[i + 1].begin_point()), 1e-12);
  EXPECT_LT(distance(m.pieces.front().begin_point(), d1_point(0.05)), 1e-12);
  EXPECT_LT(distance(m.pieces.back().end_point(), d2_point(0.05)), 1e-12);
  for (int i = 0; i <= 100; ++i) EXPECT_NEAR(norm(m.point_at(m.length() * i / 100)), 1.0, 1e-12);
}

TEST(Construction, ChainSizeAndSpacing) {
  const ConstructionParams p;
  const auto x = build_X(p);
  // Interior step at most 0.9 eps: n = ceil((|M| - 2 eps cos delta) / (0.9 eps)) + 3.
  const double len = chord_length_of_M(p.delta, 20000);
  const int expect = static_cast<int>(std::ceil((len - 2 * p.eps * std::cos(p.delta)) / (0.9 * p.eps))) + 3;
  EXPECT_EQ(chain_size(x), expect);
  EXPECT_EQ(chain_size(x), 211);
  EXPECT_EQ(x.points.size(), 217u);
  const auto chain = sample_chain(p.delta, p.eps);
  for (int i = 2; i + 1 <= chain.chain_size - 1; ++i) {
    const Point3 a = chain["t" + std::to_string(i)], b = chain["t" + std::to_string(i + 1)];
    EXPECT_LE(distance(a, b), 0.9 * p.eps + 1e-12);
  }
  // The two outer chain points straddle d1 and d2.
  EXPECT_NEAR(distance(chain["t1"], d1_point(p.delta)), distance(chain["t2"], d1_point(p.delta)), 1e-12);
  EXPECT_NO_THROW(x.validate());
}

TEST(Construction, ParameterValidation) {
  EXPECT_THROW((ConstructionParams{0.0, 0.05, 0.05}.validate()), Error);
  EXPECT_THROW((ConstructionParams{0.1, 2.0, 0.05}.validate()), Error);
  EXPECT_THROW((ConstructionParams{0.1, 0.05, 1.0}.validate()), Error);
  const auto h = ConstructionParams{}.halved();
  EXPECT_DOUBLE_EQ(h.gamma, 0.05);
  EXPECT_DOUBLE_EQ(h.eps, 0.025);
}

TEST(Construction, NamedPointsIncludeAuxiliaries) {
  const auto s = named_points({});
  for (const char* l : {"a1", "b1", "c1", "a2", "b2", "c2", "c1g", "c2g", "e1", "f1", "e2", "f2", "d1", "d2", "b4", "b5", "t1"})
    EXPECT_TRUE(s.contains(l)) << l;
  EXPECT_EQ(s.chain_size, 211);
}
