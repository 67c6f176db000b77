// knotsteiner: construct the point set X, solve minimal trees, run the lemma
// checks and certify knottedness.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotsteiner/knotsteiner.hpp"

namespace ks = knotsteiner;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  int jobs = ks::default_jobs();
  std::uint64_t seed = 0;
  std::string params_file;
  bool strict = false;
  bool timings = false;
};

struct Triple {
  double gamma = 0.1, delta = 0.05, eps = 0.05;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects an integer, got '" + v + "'");
  }
}

// Values from --params-file, overridden by anything given on the command line.
void apply_params_file(const Globals& g, Triple& t, Globals& out, const std::map<std::string, bool>& given) {
  if (g.params_file.empty()) return;
  for (const auto& [k, v] : ks::read_params_file(g.params_file)) {
    auto on_cli = [&](const char* name) { return given.count(name) && given.at(name); };
    if (k == "gamma") {
      if (!on_cli("gamma")) t.gamma = parse_double(k, v);
    } else if (k == "delta") {
      if (!on_cli("delta")) t.delta = parse_double(k, v);
    } else if (k == "eps") {
      if (!on_cli("eps")) t.eps = parse_double(k, v);
    } else if (k == "seed") {
      if (!on_cli("seed")) out.seed = static_cast<std::uint64_t>(parse_int(k, v));
    } else if (k == "jobs") {
      if (!on_cli("jobs")) out.jobs = static_cast<int>(parse_int(k, v));
    } else {
      throw UsageError("unknown key '" + k + "' in " + g.params_file);
    }
  }
}

Triple parse_triple(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("--params expects gamma,delta,eps");
  return {parse_double("gamma", parts[0]), parse_double("delta", parts[1]), parse_double("eps", parts[2])};
}

void check_triple(const Triple& t) {
  try {
    ks::ConstructionParams{t.gamma, t.delta, t.eps}.validate();
  } catch (const ks::Error& e) {
    throw UsageError(e.what());
  }
}

/// X from the construction gets the cluster decomposition; anything else is
/// solved directly.
bool looks_like_construction(const ks::PointsFile& f) {
  if (!f.provenance || !f.terminals.continua.empty()) return false;
  const int n = f.provenance->n;
  if (static_cast<int>(f.terminals.points.size()) != n + 6) return false;
  for (const char* l : {"a1", "e1", "f1", "a2", "e2", "f2"}) {
    bool found = false;
    for (const auto& p : f.terminals.points) found = found || p.label == l;
    if (!found) return false;
  }
  for (int i = 1; i <= n; ++i) {
    bool found = false;
    const std::string l = "t" + std::to_string(i);
    for (const auto& p : f.terminals.points) found = found || p.label == l;
    if (!found) return false;
  }
  return true;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_report(const ks::LemmaReport& r, bool timings) {
  std::printf("%-12s %s  margin %.3g", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.margin);
  if (timings) std::printf("  %.2fs", r.runtime);
  std::printf("\n");
  if (!r.pass) {
    for (const auto& c : r.checks)
      if (!c.pass) std::printf("    failed: %s (%.12g %s %.12g)\n", c.name.c_str(), c.lhs, c.relation.c_str(), c.rhs);
    for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner minimal trees in R^3 and a knotted example"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for perturbation trials and projections");
  app.add_option("--params-file", g.params_file, "key=value file (gamma, delta, eps, seed, jobs)")->check(CLI::ExistingFile);
  app.add_flag("--strict", g.strict, "also run with halved gamma, delta, eps");
  app.add_flag("--timings", g.timings, "report runtimes");

  Triple ct;
  std::string construct_out;
  auto* construct = app.add_subcommand("construct", "write the point set X");
  auto* o_gamma = construct->add_option("--gamma", ct.gamma);
  auto* o_delta = construct->add_option("--delta", ct.delta);
  auto* o_eps = construct->add_option("--eps", ct.eps);
  construct->add_option("-o,--output", construct_out, "points json")->required();

  std::string solve_in, solve_out;
  auto* solve = app.add_subcommand("solve", "minimal tree of a points file");
  solve->add_option("-i,--input", solve_in, "points json")->required()->check(CLI::ExistingFile);
  solve->add_option("-o,--output", solve_out, "tree json")->required();

  std::string lemma = "all", report_json, params_str;
  auto* verify = app.add_subcommand("verify", "run lemma checks");
  verify->add_option("--lemma", lemma, "lemma id or 'all'");
  verify->add_option("--json", report_json, "report json");
  auto* o_params = verify->add_option("--params", params_str, "gamma,delta,eps");

  std::string tree_in, cert_out, svg_out;
  auto* knot = app.add_subcommand("knot", "certify that a tree is knotted");
  knot->add_option("--tree", tree_in, "tree json")->required()->check(CLI::ExistingFile);
  knot->add_option("-o,--output", cert_out, "certificate json");
  knot->add_option("--svg", svg_out, "diagram svg");

  std::string export_in, export_out, format = "obj";
  auto* exp = app.add_subcommand("export", "convert a tree json");
  exp->add_option("--tree", export_in, "tree json")->required()->check(CLI::ExistingFile);
  exp->add_option("--format", format, "obj or json")->check(CLI::IsMember({"obj", "json"}));
  exp->add_option("-o,--output", export_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Globals eff = g;
    const auto t0 = std::chrono::steady_clock::now();

    if (*construct) {
      apply_params_file(g, ct, eff,
                        {{"gamma", o_gamma->count() > 0}, {"delta", o_delta->count() > 0}, {"eps", o_eps->count() > 0},
                         {"seed", app.get_option("--seed")->count() > 0}, {"jobs", app.get_option("--jobs")->count() > 0}});
      check_triple(ct);
      const auto f = ks::construction_points({ct.gamma, ct.delta, ct.eps});
      ks::write_json(construct_out, ks::to_json(f));
      std::printf("wrote %zu points (n = %d) to %s\n", f.terminals.points.size(), f.provenance->n, construct_out.c_str());
      if (eff.strict) {
        const auto h = ks::ConstructionParams{ct.gamma, ct.delta, ct.eps}.halved();
        std::printf("halved parameters give n = %d\n", ks::chain_size(ks::build_X(h)));
      }
    } else if (*solve) {
      Triple unused;
      apply_params_file(g, unused, eff,
                        {{"seed", app.get_option("--seed")->count() > 0}, {"jobs", app.get_option("--jobs")->count() > 0}});
      const auto f = ks::points_from_json(ks::read_json(solve_in));
      ks::SolveOptions opt;
      opt.jobs = eff.jobs;
      ks::SolveResult r;
      const bool decomposed = looks_like_construction(f);
      if (decomposed)
        r = ks::solve_decomposed(f.terminals, ks::default_cluster_spec(f.provenance->n), opt);
      else
        r = ks::solve_minimal_graph(f.terminals, opt);
      ks::write_json(solve_out, ks::to_json(r.best));
      std::printf("%s: length %.12g, %zu Steiner, %zu attachment, topology %s\n", decomposed ? "decomposed" : "exact",
                  r.best.length, r.best.count(ks::VertexRole::Steiner), r.best.count(ks::VertexRole::Attachment),
                  r.encoding.c_str());
      if (r.ties.size() > 1) std::printf("%zu equal-length topologies\n", r.ties.size());
      std::printf("uniqueness gap %.3g%s\n", r.uniqueness_gap, r.gap_is_lower_bound ? " (lower bound)" : "");
    } else if (*verify) {
      Triple t;
      if (o_params->count() > 0) t = parse_triple(params_str);
      const bool on_cli = o_params->count() > 0;
      apply_params_file(g, t, eff,
                        {{"gamma", on_cli}, {"delta", on_cli}, {"eps", on_cli},
                         {"seed", app.get_option("--seed")->count() > 0}, {"jobs", app.get_option("--jobs")->count() > 0}});
      check_triple(t);
      std::vector<std::string> ids;
      if (lemma == "all") {
        ids = ks::lemma_ids();
      } else {
        bool known = false;
        for (const auto& id : ks::lemma_ids()) known = known || id == lemma;
        if (!known) throw UsageError("unknown lemma id '" + lemma + "'");
        ids = {lemma};
      }
      std::vector<ks::LemmaParams> runs{{t.gamma, t.delta, t.eps, eff.seed, eff.jobs}};
      if (eff.strict) runs.push_back({t.gamma / 2, t.delta / 2, t.eps / 2, eff.seed, eff.jobs});
      bool all_pass = true;
      ks::Json out;
      out["runs"] = ks::Json::array();
      for (const auto& p : runs) {
        std::printf("gamma %g  delta %g  eps %g\n", p.gamma, p.delta, p.eps);
        ks::Json run;
        run["gamma"] = p.gamma;
        run["delta"] = p.delta;
        run["eps"] = p.eps;
        run["reports"] = ks::Json::array();
        int passed = 0;
        for (const auto& id : ids) {
          const auto r = ks::verify(id, p);
          print_report(r, eff.timings);
          run["reports"].push_back(ks::to_json(r, eff.timings));
          passed += r.pass ? 1 : 0;
        }
        std::printf("%d/%zu PASS\n", passed, ids.size());
        all_pass = all_pass && passed == static_cast<int>(ids.size());
        out["runs"].push_back(run);
      }
      out["verdict"] = all_pass ? "PASS" : "FAIL";
      if (!report_json.empty()) ks::write_json(report_json, out);
      if (eff.timings) std::printf("total %.2fs\n", seconds_since(t0));
      return all_pass ? kExitOk : kExitFail;
    } else if (*knot) {
      Triple unused;
      apply_params_file(g, unused, eff,
                        {{"seed", app.get_option("--seed")->count() > 0}, {"jobs", app.get_option("--jobs")->count() > 0}});
      const auto tree = ks::graph_from_json(ks::read_json(tree_in));
      const auto cert = ks::certify(tree, eff.seed);
      std::printf("%s", ks::to_string(cert.verdict));
      if (cert.verdict != ks::KnotVerdict::PlanarUnknotted)
        std::printf("  leaves %s-%s  crossings %d  Alexander %s  determinant %lld", cert.leaf_a.c_str(),
                    cert.leaf_b.c_str(), cert.crossings, cert.alexander.to_string().c_str(), cert.determinant);
      std::printf("\n");
      if (!cert_out.empty()) ks::write_json(cert_out, ks::to_json(cert));
      if (!svg_out.empty()) ks::write_atomic(svg_out, ks::diagram_svg(cert.diagram));
    } else if (*exp) {
      const auto tree = ks::graph_from_json(ks::read_json(export_in));
      ks::write_atomic(export_out, format == "obj" ? ks::to_obj(tree) : ks::to_json(tree).dump(2) + "\n");
      std::printf("wrote %s\n", export_out.c_str());
    }
    if (eff.timings) std::printf("total %.2fs\n", seconds_since(t0));
    return kExitOk;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const ks::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ks::ErrorKind::Io || e.kind() == ks::ErrorKind::OutOfRange ? kExitUsage : kExitFail;
  }
}
