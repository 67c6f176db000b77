#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "knotsteiner_json_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Json, TreeRoundTrip) {
  const std::vector<Point3> sq{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  auto g = solve_minimal_tree(sq, {}, {"p", "q", "r", "s"}).best;
  g.attachments.push_back({"Q", 0.25, 1});
  const Json j = to_json(g);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"vertices", "edges", "length", "attachments"}));
  std::vector<std::string> vkeys;
  for (const auto& [k, v] : j["vertices"][0].items()) vkeys.push_back(k);
  EXPECT_EQ(vkeys, (std::vector<std::string>{"id", "xyz", "role", "label"}));
  const auto back = graph_from_json(Json::parse(j.dump()));
  ASSERT_EQ(back.vertices.size(), g.vertices.size());
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(back.length, g.length);
  EXPECT_EQ(back.vertices[0].label, "p");
  EXPECT_EQ(back.attachments.front().continuum, "Q");
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Json, MalformedTreesRejected) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges":[]})")), Error);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":[{"id":0,"xyz":[0,0,0],"role":"terminal"}],"edges":[[0,3]]})")), Error);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":[{"id":0,"xyz":[0,0],"role":"terminal"}],"edges":[]})")), Error);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":[{"id":0,"xyz":[0,0,0],"role":"hub"}],"edges":[]})")), Error);
}

TEST(Json, PointsRoundTripWithContinua) {
  PointsFile f;
  f.terminals.points = {{"a", {1, 2, 3}}, {"b", {0, 0.5, -1}}};
  f.terminals.continua.push_back(Continuum::circle("Q", {{0, 0, 0}, 1.0, {0, 0, 1}}));
  f.terminals.continua.push_back(continuum_M(0.05));
  const Json j = to_json(f);
  const auto back = points_from_json(Json::parse(j.dump()));
  ASSERT_EQ(back.terminals.continua.size(), 2u);
  EXPECT_TRUE(back.terminals.continua[0].closed());
  EXPECT_NEAR(back.terminals.continua[1].length(), continuum_M(0.05).length(), 1e-12);
  EXPECT_EQ(to_json(back).dump(), j.dump());
  const auto m = points_from_json(Json::parse(R"({"points":[],"continua":[{"label":"M","type":"M","delta":0.05}]})"));
  EXPECT_NEAR(m.terminals.continua.front().length(), arc_M_length(0.05), 1e-12);
}

TEST(Json, ConstructionPointsCarryProvenance) {
  const auto f = construction_points({});
  const Json j = to_json(f);
  EXPECT_EQ(j["points"].size(), 217u);
  EXPECT_EQ(j["provenance"]["n"], 211);
  EXPECT_EQ(j["provenance"]["gamma"], 0.1);
  EXPECT_EQ(to_json(construction_points({})).dump(), j.dump());
}

TEST(Json, CertificateFields) {
  KnotCertificate c;
  c.leaf_a = "e1";
  c.leaf_b = "e2";
  c.alexander = {{1, -1, 1}, 0};
  c.determinant = 3;
  c.verdict = KnotVerdict::Knotted;
  const Json j = to_json(c);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  ASSERT_GE(keys.size(), 6u);
  EXPECT_EQ(std::vector<std::string>(keys.begin(), keys.begin() + 6),
            (std::vector<std::string>{"leafPair", "gaussCode", "alexanderCoeffs", "lowestExp", "determinant", "verdict"}));
  EXPECT_EQ(j["verdict"], "KNOTTED");
  EXPECT_EQ(j["alexanderCoeffs"], Json::array({1, -1, 1}));
}

TEST(Json, ReportRuntimeOnlyWithTimings) {
  LemmaReport r;
  r.id = "four";
  r.put("x", std::numeric_limits<double>::infinity());
  r.less("c", 1.0, 2.0);
  r.conclude();
  EXPECT_FALSE(to_json(r).contains("runtime"));
  EXPECT_TRUE(to_json(r, true).contains("runtime"));
  EXPECT_EQ(to_json(r)["quantities"]["x"], "inf");
  EXPECT_EQ(to_json(r)["verdict"], "PASS");
}

TEST(Json, AtomicWriteReplacesFile) {
  const auto p = scratch("atomic.json");
  write_atomic(p.string(), "one");
  write_atomic(p.string(), "two");
  EXPECT_EQ(read_text(p.string()), "two");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  EXPECT_THROW(write_atomic((scratch("no_such_dir") / "x" / "y.json").string(), "z"), Error);
  EXPECT_THROW(read_json(scratch("missing.json").string()), Error);
}

TEST(Json, ParamsText) {
  const auto m = parse_params_text("# defaults\ngamma = 0.05\n\n delta=0.02 # tighter\neps=0.01\n");
  EXPECT_EQ(m.at("gamma"), "0.05");
  EXPECT_EQ(m.at("delta"), "0.02");
  EXPECT_EQ(m.at("eps"), "0.01");
  EXPECT_THROW(parse_params_text("gamma 0.1\n"), Error);
  EXPECT_THROW(parse_params_text("=3\n"), Error);
}

TEST(Json, ObjExport) {
  EmbeddedGraph g;
  g.add_vertex({0, 0, 0}, VertexRole::Terminal);
  g.add_vertex({1, 0, 0}, VertexRole::Terminal);
  g.edges = {{0, 1}};
  g.update_length();
  const auto obj = to_obj(g);
  EXPECT_NE(obj.find("v 1 0 0\n"), std::string::npos);
  EXPECT_NE(obj.find("l 1 2\n"), std::string::npos);
}
