#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "knotsteiner/continuum.hpp"
#include "knotsteiner/error.hpp"
#include "knotsteiner/geometry.hpp"
#include "knotsteiner/graph.hpp"
#include "knotsteiner/optimize.hpp"
#include "knotsteiner/parallel.hpp"
#include "knotsteiner/topology.hpp"

namespace knotsteiner {

struct LabeledPoint {
  std::string label;
  Point3 xyz;
};

struct TerminalSet {
  std::vector<LabeledPoint> points;
  std::vector<Continuum> continua;

  std::vector<Point3> positions() const {
    std::vector<Point3> out;
    for (const auto& p : points) out.push_back(p.xyz);
    return out;
  }
  const LabeledPoint& at(const std::string& label) const {
    for (const auto& p : points)
      if (p.label == label) return p;
    throw Error(ErrorKind::OutOfRange, "no terminal labeled '" + label + "'");
  }
  /// Throws on duplicate labels.
  void validate() const {
    std::set<std::string> seen;
    for (const auto& p : points) {
      if (!p.xyz.is_finite()) throw Error(ErrorKind::DegenerateInput, "terminal '" + p.label + "' is not finite");
      if (!seen.insert(p.label).second) throw Error(ErrorKind::DegenerateInput, "duplicate label '" + p.label + "'");
    }
    for (const auto& c : continua)
      if (!seen.insert(c.label).second) throw Error(ErrorKind::DegenerateInput, "duplicate label '" + c.label + "'");
  }
};

struct SolveOptions {
  int jobs = 1;
  int exhaustive_cap = kDefaultExhaustiveCap;
  ForestCaps caps;
  double tie_tol = 1e-9;
  double contract_tol = 1e-6;
  double distinct_tol = 1e-5;  ///< segment-set distance separating two solutions
  double window = 0.05;        ///< refine at most this far above the incumbent
  int continuum_samples = 6;
  OptimizerOptions optimizer;
};

struct SolveResult {
  EmbeddedGraph best;
  std::string encoding;
  std::vector<std::string> ties;  ///< distinct encodings within tie_tol, sorted
  std::vector<EmbeddedGraph> tied_graphs;  ///< one geometrically distinct graph per tie
  double second_best = std::numeric_limits<double>::infinity();
  double uniqueness_gap = std::numeric_limits<double>::infinity();
  bool gap_is_lower_bound = false;  ///< second best not refined; gap is at least this
  std::size_t candidates = 0;
  std::size_t refined = 0;
  bool attachment_cap_reached = false;
  bool truncated = false;
};

namespace detail {

inline int role_rank(VertexRole r) {
  return r == VertexRole::Terminal ? 2 : (r == VertexRole::Attachment ? 1 : 0);
}

}  // namespace detail

/// Merges edges shorter than tol into their endpoint of higher rank
/// (terminal > attachment > Steiner); coincident attachments merge too.
inline void contract_short_edges(EmbeddedGraph& g, double tol) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      auto [keep, drop] = g.edges[i];
      if (g.edge_length(g.edges[i]) >= tol) continue;
      const int rk = detail::role_rank(g.vertices[keep].role), rd = detail::role_rank(g.vertices[drop].role);
      if (rd > rk) std::swap(keep, drop);
      const int lo = std::min(rk, rd), hi = std::max(rk, rd);
      if (lo == 2 || (lo == 1 && hi == 2)) continue;
      if (lo == 1 && g.vertices[keep].role == VertexRole::Attachment) {
        // two attachments: must be on the same continuum
        std::string ck, cd;
        for (const auto& a : g.attachments) {
          if (a.vertex == keep) ck = a.continuum;
          if (a.vertex == drop) cd = a.continuum;
        }
        if (ck != cd) continue;
        std::erase_if(g.attachments, [&](const Attachment& a) { return a.vertex == drop; });
      }
      if (g.vertices[keep].role == VertexRole::Steiner && g.vertices[drop].role == VertexRole::Steiner)
        g.vertices[keep].xyz = 0.5 * (g.vertices[keep].xyz + g.vertices[drop].xyz);
      g.edges.erase(g.edges.begin() + static_cast<long>(i));
      for (auto& e : g.edges) {
        if (e.first == drop) e.first = keep;
        if (e.second == drop) e.second = keep;
      }
      changed = true;
      break;
    }
  }
  std::set<Edge> uniq;
  std::vector<Edge> edges;
  for (auto [a, b] : g.edges) {
    if (a == b) continue;
    if (uniq.insert({std::min(a, b), std::max(a, b)}).second) edges.emplace_back(a, b);
  }
  g.edges = std::move(edges);
  g.drop_isolated(VertexRole::Terminal);
  g.update_length();
}

/// Topology of a graph whose first vertices are its terminals, as many as
/// `terminals`, and whose remaining vertices are Steiner points.
inline SteinerTopology topology_of(const EmbeddedGraph& g, int terminals) {
  SteinerTopology t{terminals, static_cast<int>(g.vertices.size()) - terminals, g.edges};
  return t;
}

namespace detail {

struct BlockSolution {
  EmbeddedGraph graph;
  double length = 0.0;
  std::string encoding;
};

struct BlockOutcome {
  std::vector<BlockSolution> refined;  ///< sorted by length
  double next_lb = std::numeric_limits<double>::infinity();
  std::size_t candidates = 0;
};

inline double solution_distance(const EmbeddedGraph& a, const EmbeddedGraph& b) {
  const auto sa = graph_segments(a, 1e-12), sb = graph_segments(b, 1e-12);
  if (sa.empty() && sb.empty()) return 0.0;
  if (sa.empty() || sb.empty()) return std::numeric_limits<double>::infinity();
  return segment_set_distance(sa, sb);
}

inline EmbeddedGraph problem_graph(const FixedTopologyProblem& p, const FixedTopologyResult& r,
                                   const std::vector<std::string>& fixed_labels) {
  EmbeddedGraph g;
  for (int v = 0; v < p.node_count(); ++v) {
    if (v < p.first_slot()) {
      g.add_vertex(r.positions[v], VertexRole::Terminal, v < static_cast<int>(fixed_labels.size()) ? fixed_labels[v] : "");
    } else if (p.is_slot(v)) {
      g.add_vertex(r.positions[v], VertexRole::Attachment);
      g.attachments.push_back({p.slots[v - p.first_slot()]->label, r.slot_params[v - p.first_slot()], v});
    } else {
      g.add_vertex(r.positions[v], VertexRole::Steiner);
    }
  }
  g.edges = p.edges;
  g.update_length();
  return g;
}

inline std::vector<Point3> slot_candidates(const Continuum& c, std::span<const Point3> pts, int samples) {
  std::vector<Point3> out;
  auto push = [&](const Point3& q) {
    for (const auto& o : out)
      if (distance(o, q) < 1e-6) return;
    out.push_back(q);
  };
  Point3 centroid;
  for (const auto& p : pts) {
    push(c.project(p).point);
    centroid += p;
  }
  if (!pts.empty()) push(c.project(centroid / static_cast<double>(pts.size())).point);
  for (const auto& q : c.sample(samples)) push(q);
  return out;
}

/// Lower-bound ordered search over topologies and slot starts for one block
/// of fixed points plus sliding slots. Candidates are coarsely optimized,
/// then refined in order of their lower bound until none can beat the
/// current second-best distinct solution (or the incumbent plus window).
inline BlockOutcome search_block(const std::vector<Point3>& fixed, const std::vector<std::string>& labels,
                                 const std::vector<const Continuum*>& slots, const SolveOptions& opt) {
  const int m = static_cast<int>(fixed.size() + slots.size());
  BlockOutcome out;
  const bool pure = slots.empty();

  auto finish_graph = [&](const FixedTopologyProblem& p, const FixedTopologyResult& r) {
    EmbeddedGraph g = problem_graph(p, r, labels);
    const double before = g.length;
    EmbeddedGraph c = g;
    contract_short_edges(c, opt.contract_tol);
    if (c.length > before + 1e-10) c = g;
    if (pure && c.count(VertexRole::Steiner) > 0 && c.edges.size() < g.edges.size()) {
      // Re-solve the contracted topology from its current positions.
      const SteinerTopology t = topology_of(c, static_cast<int>(fixed.size()));
      std::vector<Point3> start;
      for (int v = t.terminals; v < t.node_count(); ++v) start.push_back(c.vertices[v].xyz);
      OptimizerOptions o = opt.optimizer;
      o.coarse_mu.clear();
      FixedTopologyOptimizer re(make_problem(t, fixed), o);
      const auto rr = re.solve(start);
      if (rr.length <= c.length + 1e-10) {
        for (int v = t.terminals; v < t.node_count(); ++v) c.vertices[v].xyz = rr.positions[v];
        c.update_length();
      }
    }
    return c;
  };
  auto encode = [&](const EmbeddedGraph& g) {
    // Terminals and slots are the leading vertices in both layouts.
    EmbeddedGraph h = g;
    int term = 0;
    for (const auto& v : h.vertices)
      if (v.role != VertexRole::Steiner) ++term;
    return topology_of(h, term).canonical().encoding();
  };

  if (m == 1) {
    FixedTopologyProblem p{fixed, {}, 0, {}};
    FixedTopologyResult r;
    r.positions = fixed;
    EmbeddedGraph g = problem_graph(p, r, labels);
    out.refined.push_back({g, 0.0, "(0)"});
    out.candidates = 1;
    return out;
  }
  if (m == 2) {
    FixedTopologyProblem p{fixed, slots, 0, {{0, 1}}};
    FixedTopologyOptimizer o(p, opt.optimizer);
    const auto r = o.finish({});
    EmbeddedGraph g = finish_graph(p, r);
    out.refined.push_back({g, g.length, encode(g)});
    out.candidates = 1;
    return out;
  }

  const auto topologies = enumerate_full_topologies(m, std::max(opt.exhaustive_cap, m));
  std::vector<std::vector<Point3>> starts;
  if (slots.empty()) {
    starts.push_back({});
  } else {
    std::vector<std::vector<Point3>> cands;
    for (const auto* c : slots) cands.push_back(slot_candidates(*c, fixed, opt.continuum_samples));
    std::vector<Point3> cur;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t s, std::size_t from) {
      if (s == slots.size()) {
        starts.push_back(cur);
        return;
      }
      const bool same = s > 0 && slots[s] == slots[s - 1];
      for (std::size_t i = same ? from + 1 : 0; i < cands[s].size(); ++i) {
        cur.push_back(cands[s][i]);
        rec(s + 1, i);
        cur.pop_back();
      }
    };
    rec(0, 0);
  }

  struct Candidate {
    double lb = 0.0;
    std::size_t topo = 0;
    std::vector<double> x;
  };
  const std::size_t total = topologies.size() * starts.size();
  out.candidates = total;
  auto coarse = parallel_map(total, opt.jobs, [&](std::size_t i) {
    const std::size_t ti = i / starts.size(), si = i % starts.size();
    const auto& t = topologies[ti];
    FixedTopologyProblem p{fixed, slots, t.steiner, t.edges};
    FixedTopologyOptimizer o(p, opt.optimizer);
    auto x = o.harmonic_start(starts[si]);
    const double f = o.run_stages(x, opt.optimizer.coarse_mu);
    const double mu = opt.optimizer.coarse_mu.empty() ? 0.0 : opt.optimizer.coarse_mu.back();
    return Candidate{f - static_cast<double>(t.edges.size()) * mu, ti, std::move(x)};
  });
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return coarse[a].lb < coarse[b].lb; });

  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (; k < order.size(); ++k) {
    const auto& cand = coarse[order[k]];
    if (cand.lb > std::min(second, best + opt.window) + opt.tie_tol) break;
    const auto& t = topologies[cand.topo];
    FixedTopologyProblem p{fixed, slots, t.steiner, t.edges};
    FixedTopologyOptimizer o(p, opt.optimizer);
    std::vector<double> x = cand.x;
    const double f = o.run_stages(x, opt.optimizer.fine_mu);
    const auto r = o.finish(x, f, opt.optimizer.fine_mu.empty() ? 0.0 : opt.optimizer.fine_mu.back());
    EmbeddedGraph g = finish_graph(p, r);
    BlockSolution sol{g, g.length, encode(g)};
    auto pos = std::upper_bound(out.refined.begin(), out.refined.end(), sol.length,
                                [](double v, const BlockSolution& s) { return v < s.length; });
    out.refined.insert(pos, std::move(sol));
    best = out.refined.front().length;
    second = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < out.refined.size(); ++j) {
      if (out.refined[j].length >= second) break;
      if (solution_distance(out.refined[j].graph, out.refined.front().graph) > opt.distinct_tol) {
        second = out.refined[j].length;
        break;
      }
    }
  }
  out.next_lb = k < order.size() ? coarse[order[k]].lb : std::numeric_limits<double>::infinity();
  return out;
}

struct Ranked {
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  bool second_is_bound = false;
  std::vector<std::string> ties;
};

inline Ranked rank_block(const BlockOutcome& b, const SolveOptions& opt) {
  Ranked r;
  if (b.refined.empty()) return r;
  r.best = b.refined.front().length;
  std::set<std::string> ties;
  for (const auto& s : b.refined) {
    if (s.length > r.best + opt.tie_tol) break;
    ties.insert(s.encoding);
  }
  r.ties.assign(ties.begin(), ties.end());
  for (std::size_t j = 1; j < b.refined.size(); ++j)
    if (solution_distance(b.refined[j].graph, b.refined.front().graph) > opt.distinct_tol) {
      r.second = b.refined[j].length;
      break;
    }
  if (b.next_lb < r.second) {
    r.second = b.next_lb;
    r.second_is_bound = true;
  }
  return r;
}

}  // namespace detail

/// Steiner minimal tree of a finite point set by exhaustive topology search.
inline SolveResult solve_minimal_tree(std::span<const Point3> points, const SolveOptions& opt = {},
                                      std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw Error(ErrorKind::DegenerateInput, "no terminals");
  if (n > opt.exhaustive_cap)
    throw Error(ErrorKind::CapExceeded, std::to_string(n) + " terminals exceed the exhaustive cap of " +
                                            std::to_string(opt.exhaustive_cap) + "; use solve_decomposed");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (distance(points[i], points[j]) < 1e-12) throw Error(ErrorKind::DegenerateInput, "coincident terminals");
  labels.resize(n);
  const std::vector<Point3> fixed(points.begin(), points.end());
  const auto block = detail::search_block(fixed, labels, {}, opt);
  const auto rank = detail::rank_block(block, opt);
  SolveResult res;
  res.best = block.refined.front().graph;
  res.ties = rank.ties;
  res.encoding = rank.ties.empty() ? block.refined.front().encoding : rank.ties.front();
  for (const auto& s : block.refined)
    if (s.encoding == res.encoding && s.length <= rank.best + opt.tie_tol) {
      res.best = s.graph;
      break;
    }
  for (const auto& e : rank.ties)
    for (const auto& s : block.refined)
      if (s.encoding == e) {
        res.tied_graphs.push_back(s.graph);
        break;
      }
  res.second_best = rank.second;
  res.uniqueness_gap = rank.second - res.best.length;
  res.gap_is_lower_bound = rank.second_is_bound;
  res.candidates = block.candidates;
  res.refined = block.refined.size();
  return res;
}

/// Minimal connecting graph for points plus continuum terminals, over all
/// forest configurations within the caps. Points already on a continuum are
/// connected for free and dropped.
inline SolveResult solve_minimal_graph(const TerminalSet& terminals, const SolveOptions& opt = {}) {
  terminals.validate();
  std::vector<LabeledPoint> pts;
  for (const auto& p : terminals.points) {
    bool on = false;
    for (const auto& c : terminals.continua) on = on || c.contains(p.xyz);
    if (!on) pts.push_back(p);
  }
  if (terminals.continua.empty()) {
    std::vector<Point3> xyz;
    std::vector<std::string> labels;
    for (const auto& p : pts) {
      xyz.push_back(p.xyz);
      labels.push_back(p.label);
    }
    return solve_minimal_tree(xyz, opt, labels);
  }
  const int n = static_cast<int>(pts.size());
  SolveResult res;
  if (n == 0) {
    if (terminals.continua.size() > 1)
      throw Error(ErrorKind::OutOfRange, "several continua with no point terminals are not supported");
    for (const auto& p : terminals.points) res.best.add_vertex(p.xyz, VertexRole::Terminal, p.label);
    res.encoding = "{}";
    res.ties = {"{}"};
    return res;
  }
  const auto configs = enumerate_forest_configs(n, static_cast<int>(terminals.continua.size()), opt.caps);
  res.truncated = configs.truncated;

  // Memoized block searches keyed by (point set, slot multiset).
  std::map<std::pair<std::vector<int>, std::vector<int>>, std::size_t> key_of;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> keys;
  for (const auto& cfg : configs.configs)
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
      auto key = std::make_pair(cfg.blocks[b], cfg.attachments[b]);
      if (key_of.emplace(key, keys.size()).second) keys.push_back(key);
    }
  SolveOptions inner = opt;
  inner.jobs = 1;
  const auto blocks = parallel_map(keys.size(), opt.jobs, [&](std::size_t i) {
    std::vector<Point3> fixed;
    std::vector<std::string> labels;
    for (int p : keys[i].first) {
      fixed.push_back(pts[p].xyz);
      labels.push_back(pts[p].label);
    }
    std::vector<const Continuum*> slots;
    for (int c : keys[i].second) slots.push_back(&terminals.continua[c]);
    return detail::search_block(fixed, labels, slots, inner);
  });
  std::vector<detail::Ranked> ranks;
  for (const auto& b : blocks) {
    ranks.push_back(detail::rank_block(b, opt));
    res.candidates += b.candidates;
    res.refined += b.refined.size();
  }

  struct Total {
    double length;
    std::size_t config;
  };
  std::vector<Total> totals;
  for (std::size_t c = 0; c < configs.configs.size(); ++c) {
    double s = 0.0;
    for (std::size_t b = 0; b < configs.configs[c].blocks.size(); ++b)
      s += ranks[key_of.at({configs.configs[c].blocks[b], configs.configs[c].attachments[b]})].best;
    totals.push_back({s, c});
  }
  std::stable_sort(totals.begin(), totals.end(), [](const Total& a, const Total& b) { return a.length < b.length; });
  // Among tied configurations: most blocks, then fewest slots.
  auto shape = [&](std::size_t c) {
    std::size_t k = 0;
    for (const auto& a : configs.configs[c].attachments) k += a.size();
    return std::make_pair(-static_cast<long>(configs.configs[c].blocks.size()), k);
  };
  {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < totals.size() && totals[i].length <= totals.front().length + opt.tie_tol; ++i)
      if (shape(totals[i].config) < shape(totals[pick].config)) pick = i;
    std::rotate(totals.begin(), totals.begin() + static_cast<long>(pick), totals.begin() + static_cast<long>(pick) + 1);
  }

  auto assemble = [&](std::size_t c) {
    const auto& cfg = configs.configs[c];
    EmbeddedGraph g;
    std::string enc;
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
      const auto& blk = blocks[key_of.at({cfg.blocks[b], cfg.attachments[b]})];
      const auto& part = blk.refined.front();
      const int base = static_cast<int>(g.vertices.size());
      for (const auto& v : part.graph.vertices) g.add_vertex(v.xyz, v.role, v.label);
      for (const auto& [u, v] : part.graph.edges) g.edges.emplace_back(u + base, v + base);
      for (auto a : part.graph.attachments) {
        a.vertex += base;
        g.attachments.push_back(a);
      }
      enc += (b ? "+" : "") + part.encoding;
    }
    // Terminals first, then attachments, then Steiner points.
    std::vector<int> order(g.vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return detail::role_rank(g.vertices[a].role) > detail::role_rank(g.vertices[b].role);
    });
    std::vector<int> inv(order.size());
    EmbeddedGraph h;
    for (std::size_t i = 0; i < order.size(); ++i) {
      inv[order[i]] = static_cast<int>(i);
      h.add_vertex(g.vertices[order[i]].xyz, g.vertices[order[i]].role, g.vertices[order[i]].label);
    }
    for (const auto& [u, v] : g.edges) h.edges.emplace_back(inv[u], inv[v]);
    for (auto a : g.attachments) {
      a.vertex = inv[a.vertex];
      h.attachments.push_back(a);
    }
    std::stable_sort(h.attachments.begin(), h.attachments.end(),
                     [](const Attachment& a, const Attachment& b) { return a.vertex < b.vertex; });
    // Components touching a continuum at the same point share that vertex.
    for (std::size_t i = 0; i < h.attachments.size(); ++i)
      for (std::size_t j = i + 1; j < h.attachments.size(); ++j)
        if (h.attachments[i].continuum == h.attachments[j].continuum &&
            distance(h.vertices[h.attachments[i].vertex].xyz, h.vertices[h.attachments[j].vertex].xyz) < opt.contract_tol)
          h.edges.emplace_back(h.attachments[i].vertex, h.attachments[j].vertex);
    contract_short_edges(h, opt.contract_tol);
    return std::make_pair(h, cfg.describe() + ":" + enc);
  };

  const auto [best_graph, best_enc] = assemble(totals.front().config);
  res.best = best_graph;
  res.encoding = best_enc;
  const double best = totals.front().length;
  std::set<std::string> ties{best_enc};
  res.tied_graphs.push_back(best_graph);
  for (std::size_t i = 1; i < totals.size(); ++i) {
    if (totals[i].length > best + opt.tie_tol) break;
    const auto [g, e] = assemble(totals[i].config);
    bool fresh = true;
    for (const auto& h : res.tied_graphs) fresh = fresh && detail::solution_distance(g, h) > opt.distinct_tol;
    if (fresh) {
      ties.insert(e);
      res.tied_graphs.push_back(g);
    }
  }
  res.ties.assign(ties.begin(), ties.end());

  // Second best: next distinct configuration, or a block-level alternative.
  double second = std::numeric_limits<double>::infinity();
  bool bound = false;
  for (std::size_t i = 1; i < totals.size(); ++i) {
    if (totals[i].length >= second) break;
    const auto [g, e] = assemble(totals[i].config);
    bool fresh = true;
    for (const auto& h : res.tied_graphs) fresh = fresh && detail::solution_distance(g, h) > opt.distinct_tol;
    if (fresh || totals[i].length > best + opt.tie_tol) {
      if (detail::solution_distance(g, best_graph) > opt.distinct_tol) {
        second = totals[i].length;
        break;
      }
    }
  }
  const auto& cfg = configs.configs[totals.front().config];
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const auto& rk = ranks[key_of.at({cfg.blocks[b], cfg.attachments[b]})];
    const double alt = best - rk.best + rk.second;
    if (alt < second) {
      second = alt;
      bound = rk.second_is_bound;
    }
  }
  res.second_best = second;
  res.uniqueness_gap = second - best;
  res.gap_is_lower_bound = bound;
  for (const auto& blk : cfg.attachments)
    if (static_cast<int>(blk.size()) == opt.caps.max_attachments_per_block) res.attachment_cap_reached = true;
  return res;
}

/// Clusters solved exactly; chain labels joined in order by straight edges.
struct ClusterSpec {
  std::vector<std::vector<std::string>> clusters;
  std::vector<std::string> chain;
};

/// Union of exact cluster trees and a verbatim chain. Not a global optimum
/// claim: only the pieces are minimal. Every combination of tied cluster
/// trees is returned in tied_graphs; the primary uses each cluster's primary.
inline SolveResult solve_decomposed(const TerminalSet& terminals, const ClusterSpec& spec, const SolveOptions& opt = {}) {
  terminals.validate();
  SolveResult res;
  std::vector<SolveResult> parts;
  for (const auto& cl : spec.clusters) {
    std::vector<Point3> xyz;
    for (const auto& l : cl) xyz.push_back(terminals.at(l).xyz);
    parts.push_back(solve_minimal_tree(xyz, opt, cl));
    res.candidates += parts.back().candidates;
    res.refined += parts.back().refined;
  }
  auto unite = [&](const std::vector<const EmbeddedGraph*>& pick) {
    EmbeddedGraph g;
    std::map<std::string, int> vid;
    for (const auto& p : terminals.points) vid[p.label] = g.add_vertex(p.xyz, VertexRole::Terminal, p.label);
    for (const auto* tree : pick) {
      std::vector<int> map(tree->vertices.size());
      for (const auto& v : tree->vertices)
        map[v.id] = v.role == VertexRole::Terminal ? vid.at(v.label) : g.add_vertex(v.xyz, VertexRole::Steiner);
      for (const auto& [a, b] : tree->edges) g.edges.emplace_back(map[a], map[b]);
    }
    for (std::size_t i = 0; i + 1 < spec.chain.size(); ++i)
      g.edges.emplace_back(vid.at(spec.chain[i]), vid.at(spec.chain[i + 1]));
    g.update_length();
    if (!g.is_tree()) throw Error(ErrorKind::InvalidTopology, "clusters and chain do not form a spanning tree");
    return g;
  };
  std::vector<const EmbeddedGraph*> primary;
  std::string enc;
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& r : parts) {
    primary.push_back(&r.best);
    enc += (enc.empty() ? "" : "+") + r.encoding;
    if (r.uniqueness_gap < gap) {
      gap = r.uniqueness_gap;
      res.gap_is_lower_bound = r.gap_is_lower_bound;
    }
  }
  res.best = unite(primary);
  res.encoding = enc + "+chain" + std::to_string(spec.chain.size());
  std::size_t combos = 1;
  for (const auto& r : parts) combos *= std::max<std::size_t>(1, r.tied_graphs.size());
  if (combos > 64) throw Error(ErrorKind::CapExceeded, "too many tied cluster combinations");
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<const EmbeddedGraph*> pick;
    std::string e;
    std::size_t rest = c;
    for (const auto& r : parts) {
      const std::size_t k = std::max<std::size_t>(1, r.tied_graphs.size());
      const std::size_t i = rest % k;
      rest /= k;
      pick.push_back(r.tied_graphs.empty() ? &r.best : &r.tied_graphs[i]);
      e += (e.empty() ? "" : "+") + (r.tied_graphs.empty() ? r.encoding : r.ties[std::min(i, r.ties.size() - 1)]);
    }
    res.tied_graphs.push_back(unite(pick));
    res.ties.push_back(e + "+chain" + std::to_string(spec.chain.size()));
  }
  res.uniqueness_gap = gap;
  res.second_best = res.best.length + gap;
  return res;
}

struct OptimalityReport {
  double max_angle_deviation = 0.0;   ///< at degree-3 Steiner vertices
  double max_coplanarity_defect = 0.0;
  double max_direction_sum = 0.0;     ///< norm of summed unit edge directions at Steiner vertices
  double min_terminal_angle = kPi;    ///< smallest angle between edges at a terminal
  double max_attachment_residual = 0.0;
  int trials = 0;
  double best_improvement = -std::numeric_limits<double>::infinity();
  bool pass = false;
};

/// First-order residuals of a graph plus random perturbation trials of its
/// Steiner points, each re-optimized for the same topology.
inline OptimalityReport local_optimality_report(const EmbeddedGraph& g, std::span<const Continuum> continua, int trials,
                                                std::uint64_t seed = 0, const OptimizerOptions& base_opt = {}) {
  OptimalityReport rep;
  const auto adj = g.adjacency();
  for (const auto& v : g.vertices) {
    std::vector<Point3> dirs;
    for (int w : adj[v.id]) {
      const Point3 d = g.vertices[w].xyz - v.xyz;
      if (norm(d) > 1e-12) dirs.push_back(normalized(d));
    }
    if (v.role == VertexRole::Steiner) {
      Point3 s;
      for (const auto& d : dirs) s += d;
      rep.max_direction_sum = std::max(rep.max_direction_sum, norm(s));
      if (dirs.size() == 3) {
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) {
            const double ang = std::acos(std::clamp(dot(dirs[i], dirs[j]), -1.0, 1.0));
            rep.max_angle_deviation = std::max(rep.max_angle_deviation, std::abs(ang - kTwoThirdsPi));
          }
        rep.max_coplanarity_defect = std::max(rep.max_coplanarity_defect, std::abs(dot(dirs[0], cross(dirs[1], dirs[2]))));
      }
    } else if (v.role == VertexRole::Terminal) {
      for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
          rep.min_terminal_angle = std::min(rep.min_terminal_angle, std::acos(std::clamp(dot(dirs[i], dirs[j]), -1.0, 1.0)));
    }
  }
  auto find_continuum = [&](const std::string& label) -> const Continuum* {
    for (const auto& c : continua)
      if (c.label == label) return &c;
    return nullptr;
  };
  for (const auto& a : g.attachments) {
    const Continuum* c = find_continuum(a.continuum);
    if (!c) throw Error(ErrorKind::OutOfRange, "unknown continuum '" + a.continuum + "'");
    const Point3 at = g.vertices[a.vertex].xyz;
    const Point3 tan = c->tangent_at(a.param);
    Point3 pull;
    for (int w : adj[a.vertex]) {
      const Point3 d = g.vertices[w].xyz - at;
      if (norm(d) > 1e-12) pull += normalized(d);
    }
    double res = dot(pull, tan);
    const double len = c->length();
    if (!c->closed()) {
      // At an end of an open arc only a pull off the arc counts.
      if (a.param <= 1e-12) res = std::max(0.0, res);
      if (a.param >= len - 1e-12) res = std::min(0.0, res);
    }
    rep.max_attachment_residual = std::max(rep.max_attachment_residual, std::abs(res));
  }

  // Perturbation trials over Steiner points; slots slide on their continuum.
  FixedTopologyProblem p;
  std::vector<int> node(g.vertices.size(), -1);
  std::vector<int> steiner_ids;
  const auto deg = g.degrees();
  std::vector<bool> as_slot(g.vertices.size(), false);
  std::vector<const Continuum*> slot_of(g.vertices.size(), nullptr);
  for (const auto& a : g.attachments) {
    if (deg[a.vertex] != 1) continue;
    const int w = adj[a.vertex][0];
    if (g.vertices[w].role == VertexRole::Attachment) continue;
    as_slot[a.vertex] = true;
    slot_of[a.vertex] = find_continuum(a.continuum);
  }
  for (const auto& v : g.vertices)
    if (v.role != VertexRole::Steiner && !as_slot[v.id]) {
      node[v.id] = static_cast<int>(p.fixed.size());
      p.fixed.push_back(v.xyz);
    }
  for (const auto& v : g.vertices)
    if (as_slot[v.id]) {
      node[v.id] = static_cast<int>(p.fixed.size() + p.slots.size());
      p.slots.push_back(slot_of[v.id]);
    }
  for (const auto& v : g.vertices)
    if (v.role == VertexRole::Steiner) {
      node[v.id] = static_cast<int>(p.fixed.size() + p.slots.size()) + p.steiner++;
      steiner_ids.push_back(v.id);
    }
  for (const auto& [a, b] : g.edges) p.edges.emplace_back(node[a], node[b]);

  const double base = g.compute_length();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double scales[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  OptimizerOptions o = base_opt;
  o.coarse_mu.clear();
  o.fine_mu = {1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const double s = scales[t % 5];
    std::vector<Point3> start;
    for (int id : steiner_ids) start.push_back(g.vertices[id].xyz + s * Point3{unif(rng), unif(rng), unif(rng)});
    if (start.empty() && p.slots.empty()) {
      rep.best_improvement = std::max(rep.best_improvement, 0.0);
      continue;
    }
    FixedTopologyOptimizer opt(p, o);
    std::vector<Point3> slot_start;
    for (const auto& v : g.vertices)
      if (as_slot[v.id]) slot_start.push_back(v.xyz);
    const auto r = opt.solve(start, slot_start);
    rep.best_improvement = std::max(rep.best_improvement, base - r.length);
  }
  if (trials == 0) rep.best_improvement = 0.0;
  rep.pass = rep.best_improvement <= 1e-9 && rep.max_direction_sum < 1e-6 && rep.max_attachment_residual < 1e-6;
  return rep;
}

}  // namespace knotsteiner
