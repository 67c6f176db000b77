#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(KS_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string dir() {
  static const std::string d = [] {
    const fs::path p = fs::temp_directory_path() / "knotsteiner_cli_test";
    fs::create_directories(p);
    return p.string();
  }();
  return d;
}

std::string path(const std::string& name) { return dir() + "/" + name; }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("construct"), 2);
  EXPECT_EQ(run("construct --gamma 1.5 -o " + path("bad.json")), 2);
  EXPECT_EQ(run("verify --lemma nope"), 2);
  EXPECT_EQ(run("verify --lemma four --params 0.1,0.05"), 2);
  EXPECT_EQ(run("solve -i " + path("does_not_exist.json") + " -o " + path("t.json")), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, ConstructIsDeterministic) {
  ASSERT_EQ(run("construct --gamma 0.1 --delta 0.05 --eps 0.05 -o " + path("X1.json")), 0);
  ASSERT_EQ(run("construct -o " + path("X2.json")), 0);
  EXPECT_EQ(read_text(path("X1.json")), read_text(path("X2.json")));
  const auto f = points_from_json(read_json(path("X1.json")));
  EXPECT_EQ(f.terminals.points.size(), 217u);
  ASSERT_TRUE(f.provenance);
  EXPECT_EQ(f.provenance->n, 211);
}

TEST(Cli, ParamsFileAndCommandLineOverride) {
  write_atomic(path("p.txt"), "gamma=0.1\ndelta=0.05\neps=0.1\n");
  ASSERT_EQ(run("--params-file " + path("p.txt") + " construct -o " + path("Xp.json")), 0);
  const auto a = points_from_json(read_json(path("Xp.json")));
  EXPECT_EQ(a.provenance->eps, 0.1);
  ASSERT_EQ(run("--params-file " + path("p.txt") + " construct --eps 0.05 -o " + path("Xq.json")), 0);
  EXPECT_EQ(points_from_json(read_json(path("Xq.json"))).provenance->eps, 0.05);
  write_atomic(path("bad.txt"), "colour=red\n");
  EXPECT_EQ(run("--params-file " + path("bad.txt") + " construct -o " + path("Xr.json")), 2);
}

TEST(Cli, SolveKnotExportPipeline) {
  ASSERT_EQ(run("construct -o " + path("X.json")), 0);
  ASSERT_EQ(run("--jobs 2 solve -i " + path("X.json") + " -o " + path("TX.json")), 0);
  const auto tree = graph_from_json(read_json(path("TX.json")));
  EXPECT_EQ(tree.count(VertexRole::Steiner), 6u);
  EXPECT_NEAR(tree.length, 14.638399354, 1e-8);
  ASSERT_EQ(run("--jobs 1 solve -i " + path("X.json") + " -o " + path("TX1.json")), 0);
  EXPECT_EQ(read_text(path("TX.json")), read_text(path("TX1.json")));

  ASSERT_EQ(run("knot --tree " + path("TX.json") + " -o " + path("cert.json") + " --svg " + path("d.svg")), 0);
  const auto cert = read_json(path("cert.json"));
  EXPECT_EQ(cert["verdict"], "KNOTTED");
  EXPECT_EQ(cert["alexanderCoeffs"], Json::array({1, -1, 1}));
  EXPECT_EQ(cert["lowestExp"], 0);
  EXPECT_EQ(cert["determinant"], 3);
  EXPECT_NE(read_text(path("d.svg")).find("<svg"), std::string::npos);

  ASSERT_EQ(run("export --tree " + path("TX.json") + " --format obj -o " + path("TX.obj")), 0);
  EXPECT_EQ(read_text(path("TX.obj")).rfind("# length", 0), 0u);
  EXPECT_EQ(run("export --tree " + path("TX.json") + " --format ply -o " + path("TX.ply")), 2);
}

TEST(Cli, SolvePlainPointsFile) {
  write_atomic(path("sq.json"),
               R"({"points":[{"label":"a","xyz":[0,0,0]},{"label":"b","xyz":[1,0,0]},{"label":"c","xyz":[1,1,0]},{"label":"d","xyz":[0,1,0]}]})");
  ASSERT_EQ(run("solve -i " + path("sq.json") + " -o " + path("sq_tree.json")), 0);
  EXPECT_NEAR(graph_from_json(read_json(path("sq_tree.json"))).length, 1 + std::sqrt(3.0), 1e-9);
  ASSERT_EQ(run("knot --tree " + path("sq_tree.json") + " -o " + path("sq_cert.json")), 0);
  EXPECT_EQ(read_json(path("sq_cert.json"))["verdict"], "PLANAR-UNKNOTTED");
}

TEST(Cli, VerifyExitCodesFollowVerdicts) {
  ASSERT_EQ(run("verify --lemma four --json " + path("four.json")), 0);
  const auto j = read_json(path("four.json"));
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_FALSE(j["runs"][0]["reports"][0].contains("runtime"));
  ASSERT_EQ(run("--timings --strict verify --lemma circles --json " + path("circles.json")), 0);
  const auto c = read_json(path("circles.json"));
  EXPECT_EQ(c["runs"].size(), 2u);
  EXPECT_EQ(c["runs"][1]["gamma"], 0.05);
  EXPECT_TRUE(c["runs"][0]["reports"][0].contains("runtime"));
  EXPECT_EQ(run("verify --lemma splitfinal --json " + path("sf.json")), 1);
  EXPECT_EQ(read_json(path("sf.json"))["verdict"], "FAIL");
}
