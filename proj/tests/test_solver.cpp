#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;

TEST(Solver, UnitSquareHasTwoTiedTopologies) {
  const std::vector<Point3> sq{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  const auto r = solve_minimal_tree(sq);
  EXPECT_NEAR(r.best.length, 1.0 + std::sqrt(3.0), 1e-10);
  EXPECT_EQ(r.ties.size(), 2u);
  EXPECT_EQ(r.best.count(VertexRole::Steiner), 2u);
  EXPECT_TRUE(r.best.is_tree());
}

TEST(Solver, CollinearPointsGiveThePath) {
  const std::vector<Point3> p{{0, 0, 0}, {2, 0, 0}, {0.5, 0, 0}, {1.25, 0, 0}};
  const auto r = solve_minimal_tree(p);
  EXPECT_NEAR(r.best.length, 2.0, 1e-9);
  EXPECT_EQ(r.best.count(VertexRole::Steiner), 0u);
}

TEST(Solver, EquilateralTriangle) {
  const std::vector<Point3> p{{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}};
  EXPECT_NEAR(solve_minimal_tree(p).best.length, std::sqrt(3.0), 1e-12);
}

TEST(Solver, TwoPointsAndOnePoint) {
  const std::vector<Point3> one{{1, 2, 3}};
  EXPECT_EQ(solve_minimal_tree(one).best.length, 0.0);
  const std::vector<Point3> two{{0, 0, 0}, {3, 4, 0}};
  EXPECT_NEAR(solve_minimal_tree(two).best.length, 5.0, 1e-15);
}

TEST(Solver, DegenerateInputsRejected) {
  const std::vector<Point3> dup{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}};
  EXPECT_THROW(solve_minimal_tree(dup), Error);
  std::vector<Point3> many(10);
  for (int i = 0; i < 10; ++i) many[i] = {double(i), double(i * i), 0};
  EXPECT_THROW(solve_minimal_tree(many), Error);
  TerminalSet ts;
  ts.points = {{"a", {0, 0, 0}}, {"a", {1, 0, 0}}};
  EXPECT_THROW(solve_minimal_graph(ts), Error);
}

TEST(Solver, PointAndCircle) {
  // Every point of the unit circle is at distance sqrt(1 + h^2) from (0,0,h).
  TerminalSet ts;
  ts.points = {{"p", {0, 0, 0.75}}};
  ts.continua.push_back(Continuum::circle("Q", {{0, 0, 0}, 1.0, {0, 0, 1}}));
  const auto r = solve_minimal_graph(ts);
  EXPECT_NEAR(r.best.length, 1.25, 1e-9);
  ASSERT_EQ(r.best.attachments.size(), 1u);
  EXPECT_EQ(r.best.attachments.front().continuum, "Q");
}

TEST(Solver, PointOutsideCircleInItsPlane) {
  TerminalSet ts;
  ts.points = {{"p", {3, 0, 0}}, {"q", {-2.5, 0, 0}}};
  ts.continua.push_back(Continuum::circle("Q", {{0, 0, 0}, 1.0, {0, 0, 1}}));
  // Any tree joining p to q directly is at least 5.5 long; radial spokes give 3.5.
  EXPECT_NEAR(solve_minimal_graph(ts).best.length, 2.0 + 1.5, 1e-9);
}

TEST(Solver, PointOnContinuumIsFree) {
  TerminalSet ts;
  ts.points = {{"on", {1, 0, 0}}, {"off", {0, 0, 1}}};
  ts.continua.push_back(Continuum::circle("Q", {{0, 0, 0}, 1.0, {0, 0, 1}}));
  EXPECT_NEAR(solve_minimal_graph(ts).best.length, std::sqrt(2.0), 1e-9);
}

TEST(Solver, DecomposedJoinsClustersAndChain) {
  TerminalSet ts;
  ts.points = {{"a", {0, 0, 0}}, {"b", {1, 0, 0}}, {"c", {0.5, 0.8, 0}}, {"d", {0.5, 3, 0}}, {"e", {0.5, 4, 0}}};
  ClusterSpec spec{{{"a", "b", "c"}}, {"c", "d", "e"}};
  const auto r = solve_decomposed(ts, spec);
  const auto tri = three_point_minimal_tree(ts.at("a").xyz, ts.at("b").xyz, ts.at("c").xyz);
  EXPECT_NEAR(r.best.length, tri.length + 2.2 + 1.0, 1e-9);
  EXPECT_TRUE(r.best.is_tree());
}

TEST(Solver, JobsDoNotChangeTheAnswer) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point3> p(6);
  for (auto& q : p) q = {u(rng), u(rng), u(rng)};
  SolveOptions one, four;
  four.jobs = 4;
  const auto a = solve_minimal_tree(p, one), b = solve_minimal_tree(p, four);
  EXPECT_EQ(a.encoding, b.encoding);
  EXPECT_EQ(a.best.length, b.best.length);
}

TEST(Solver, LocalOptimalityOfSquareTree) {
  const std::vector<Point3> sq{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  const auto r = solve_minimal_tree(sq);
  const auto rep = local_optimality_report(r.best, {}, 50, 1);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_direction_sum, 1e-6);
  EXPECT_LT(rep.max_angle_deviation, 1e-6);
  EXPECT_EQ(rep.trials, 50);
}
