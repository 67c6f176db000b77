#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotsteiner/construction.hpp"
#include "knotsteiner/error.hpp"
#include "knotsteiner/graph.hpp"
#include "knotsteiner/knot.hpp"
#include "knotsteiner/lemmas.hpp"
#include "knotsteiner/solver.hpp"

namespace knotsteiner {

using Json = nlohmann::ordered_json;

inline Json to_json(const Point3& p) { return Json::array({p.x, p.y, p.z}); }

inline Point3 point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Io, "expected a coordinate triple");
  for (const auto& c : j)
    if (!c.is_number()) throw Error(ErrorKind::Io, "coordinate is not a number");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// ---- trees ----

inline Json to_json(const EmbeddedGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : g.vertices) {
    Json jv;
    jv["id"] = v.id;
    jv["xyz"] = to_json(v.xyz);
    jv["role"] = to_string(v.role);
    if (!v.label.empty()) jv["label"] = v.label;
    j["vertices"].push_back(jv);
  }
  j["edges"] = Json::array();
  for (const auto& [a, b] : g.edges) j["edges"].push_back(Json::array({a, b}));
  j["length"] = g.length;
  j["attachments"] = Json::array();
  for (const auto& a : g.attachments) {
    Json ja;
    ja["continuum"] = a.continuum;
    ja["param"] = a.param;
    ja["vertex"] = a.vertex;
    j["attachments"].push_back(ja);
  }
  return j;
}

inline EmbeddedGraph graph_from_json(const Json& j) {
  try {
    EmbeddedGraph g;
    for (const auto& jv : j.at("vertices")) {
      GraphVertex v;
      v.id = jv.at("id").get<int>();
      if (v.id != static_cast<int>(g.vertices.size())) throw Error(ErrorKind::Io, "vertex ids must be 0..n-1 in order");
      v.xyz = point_from_json(jv.at("xyz"));
      v.role = role_from_string(jv.at("role").get<std::string>());
      v.label = jv.value("label", std::string{});
      g.vertices.push_back(std::move(v));
    }
    const int n = static_cast<int>(g.vertices.size());
    for (const auto& je : j.at("edges")) {
      const int a = je.at(0).get<int>(), b = je.at(1).get<int>();
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw Error(ErrorKind::Io, "edge endpoint out of range");
      g.edges.emplace_back(a, b);
    }
    if (j.contains("attachments"))
      for (const auto& ja : j.at("attachments"))
        g.attachments.push_back({ja.at("continuum").get<std::string>(), ja.at("param").get<double>(), ja.value("vertex", -1)});
    g.update_length();
    return g;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed tree json: ") + e.what());
  }
}

// ---- point sets ----

struct Provenance {
  double gamma = 0.0, delta = 0.0, eps = 0.0;
  int n = 0;
};

struct PointsFile {
  TerminalSet terminals;
  std::optional<Provenance> provenance;
};

inline Json to_json(const CircleArc& a) {
  Json j;
  j["center"] = to_json(a.center);
  j["radius"] = a.radius;
  j["normal"] = to_json(a.normal);
  j["ref"] = to_json(a.ref);
  j["start"] = a.start;
  j["sweep"] = a.sweep;
  return j;
}

inline Json to_json(const Continuum& c) {
  Json j;
  j["label"] = c.label;
  if (c.closed()) {
    const auto& p = c.pieces.front();
    j["type"] = "circle";
    j["center"] = to_json(p.center);
    j["radius"] = p.radius;
    j["normal"] = to_json(p.normal);
  } else {
    j["type"] = "arcs";
    j["pieces"] = Json::array();
    for (const auto& p : c.pieces) j["pieces"].push_back(to_json(p));
  }
  return j;
}

inline Continuum continuum_from_json(const Json& j) {
  const std::string label = j.at("label").get<std::string>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "circle") {
    Circle3 c{point_from_json(j.at("center")), j.at("radius").get<double>(), normalized(point_from_json(j.at("normal")))};
    if (!c.valid()) throw Error(ErrorKind::DegenerateInput, "circle '" + label + "' is degenerate");
    return Continuum::circle(label, c);
  }
  if (type == "M") {
    Continuum m = continuum_M(j.at("delta").get<double>());
    m.label = label;
    return m;
  }
  if (type == "arcs") {
    Continuum c{label, {}};
    for (const auto& jp : j.at("pieces")) {
      CircleArc a;
      a.center = point_from_json(jp.at("center"));
      a.radius = jp.at("radius").get<double>();
      a.normal = normalized(point_from_json(jp.at("normal")));
      a.ref = normalized(point_from_json(jp.at("ref")));
      a.start = jp.at("start").get<double>();
      a.sweep = jp.at("sweep").get<double>();
      if (!(a.radius > 0.0) || !(a.sweep > 0.0)) throw Error(ErrorKind::DegenerateInput, "arc of '" + label + "' is degenerate");
      c.pieces.push_back(a);
    }
    if (c.pieces.empty()) throw Error(ErrorKind::DegenerateInput, "continuum '" + label + "' has no pieces");
    return c;
  }
  throw Error(ErrorKind::Io, "unknown continuum type '" + type + "'");
}

inline Json to_json(const PointsFile& f) {
  Json j;
  j["points"] = Json::array();
  for (const auto& p : f.terminals.points) {
    Json jp;
    jp["label"] = p.label;
    jp["xyz"] = to_json(p.xyz);
    j["points"].push_back(jp);
  }
  if (!f.terminals.continua.empty()) {
    j["continua"] = Json::array();
    for (const auto& c : f.terminals.continua) j["continua"].push_back(to_json(c));
  }
  if (f.provenance) {
    Json jp;
    jp["gamma"] = f.provenance->gamma;
    jp["delta"] = f.provenance->delta;
    jp["eps"] = f.provenance->eps;
    jp["n"] = f.provenance->n;
    j["provenance"] = jp;
  }
  return j;
}

inline PointsFile points_from_json(const Json& j) {
  try {
    PointsFile f;
    for (const auto& jp : j.at("points")) f.terminals.points.push_back({jp.at("label").get<std::string>(), point_from_json(jp.at("xyz"))});
    if (j.contains("continua"))
      for (const auto& jc : j.at("continua")) f.terminals.continua.push_back(continuum_from_json(jc));
    if (j.contains("provenance")) {
      const auto& jp = j.at("provenance");
      f.provenance = Provenance{jp.at("gamma").get<double>(), jp.at("delta").get<double>(), jp.at("eps").get<double>(),
                                jp.at("n").get<int>()};
    }
    f.terminals.validate();
    return f;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed points json: ") + e.what());
  }
}

inline PointsFile construction_points(const ConstructionParams& p) {
  PointsFile f;
  f.terminals = build_X(p);
  f.provenance = Provenance{p.gamma, p.delta, p.eps, chain_size(f.terminals)};
  return f;
}

// ---- certificates and reports ----

inline Json to_json(const KnotCertificate& c) {
  Json j;
  j["leafPair"] = Json::array({c.leaf_a, c.leaf_b});
  j["gaussCode"] = c.gauss_code;
  j["alexanderCoeffs"] = c.alexander.coeffs;
  j["lowestExp"] = c.alexander.low;
  j["determinant"] = c.determinant;
  j["verdict"] = to_string(c.verdict);
  j["alexander"] = c.alexander.to_string();
  j["crossings"] = c.crossings;
  j["closure"] = c.closure;
  j["coplanarityDefect"] = c.coplanarity_defect;
  j["direction"] = to_json(c.diagram.direction);
  return j;
}

/// Non-finite values become strings so the file stays valid JSON.
inline Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline Json to_json(const LemmaReport& r, bool timings = false) {
  Json j;
  j["id"] = r.id;
  j["params"] = {{"gamma", r.params.gamma}, {"delta", r.params.delta}, {"eps", r.params.eps}, {"seed", r.params.seed}};
  j["claim"] = r.claim;
  Json q = Json::object();
  for (const auto& [k, v] : r.quantities) q[k] = number_json(v);
  j["quantities"] = q;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["relation"] = c.relation;
    jc["lhs"] = number_json(c.lhs);
    jc["rhs"] = number_json(c.rhs);
    jc["tol"] = c.tol;
    jc["margin"] = number_json(c.margin);
    jc["pass"] = c.pass;
    j["checks"].push_back(jc);
  }
  j["notes"] = r.notes;
  j["margin"] = number_json(r.margin);
  j["uniquenessGap"] = number_json(r.uniqueness_gap);
  j["verdict"] = r.pass ? "PASS" : "FAIL";
  if (timings) j["runtime"] = r.runtime;
  return j;
}

/// Wavefront OBJ: one vertex per graph vertex, one polyline element per edge.
inline std::string to_obj(const EmbeddedGraph& g) {
  std::ostringstream os;
  os.precision(17);
  os << "# length " << g.length << "\n";
  for (const auto& v : g.vertices) os << "v " << v.xyz.x << ' ' << v.xyz.y << ' ' << v.xyz.z << "\n";
  for (const auto& [a, b] : g.edges) os << "l " << a + 1 << ' ' << b + 1 << "\n";
  return os.str();
}

// ---- files ----

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Io, "'" + path + "' is not valid json: " + e.what());
  }
}

/// Writes to a sibling temp file and renames it over the target.
inline void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto '" + path + "'");
  }
}

inline void write_json(const std::string& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

/// key=value lines; '#' starts a comment, blank lines are skipped.
inline std::map<std::string, std::string> parse_params_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Io, "params line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::Io, "params line " + std::to_string(lineno) + " has an empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> read_params_file(const std::string& path) { return parse_params_text(read_text(path)); }

}  // namespace knotsteiner
