#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "knotsteiner/error.hpp"
#include "knotsteiner/graph.hpp"

namespace knotsteiner {

/// Combinatorial tree over terminals 0..n-1 and Steiner nodes n..n+k-1.
///
/// Full topologies (every terminal a leaf, k = n - 2, Steiner degree 3) are the
/// search space; contractions of Steiner edges give the degenerate ones, where
/// Steiner nodes may have degree above 3.
struct SteinerTopology {
  int terminals = 0;
  int steiner = 0;
  std::vector<Edge> edges;

  int node_count() const { return terminals + steiner; }
  bool is_terminal(int v) const { return v < terminals; }

  std::vector<int> degrees() const {
    std::vector<int> deg(node_count(), 0);
    for (const auto& [a, b] : edges) {
      ++deg[a];
      ++deg[b];
    }
    return deg;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(node_count());
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  bool is_tree() const {
    const int n = node_count();
    if (n == 0 || static_cast<int>(edges.size()) != n - 1) return false;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (const auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n) return false;
      const int ra = find(a), rb = find(b);
      if (ra == rb) return false;
      parent[ra] = rb;
    }
    return true;
  }

  /// Tree, and every Steiner node has degree >= 3.
  bool is_valid() const {
    if (!is_tree()) return false;
    const auto deg = degrees();
    for (int v = terminals; v < node_count(); ++v)
      if (deg[v] < 3) return false;
    return true;
  }

  bool is_full() const {
    if (!is_valid() || steiner != terminals - 2) return false;
    const auto deg = degrees();
    for (int v = 0; v < terminals; ++v)
      if (deg[v] != 1) return false;
    for (int v = terminals; v < node_count(); ++v)
      if (deg[v] != 3) return false;
    return true;
  }

  /// Canonical string, rooted at terminal 0. A terminal leaf prints as its id,
  /// a Steiner node as "(c1,c2,...)", an inner terminal i as "[i,c1,...]",
  /// and the root as "(0,c1,...)"; children are sorted. Only Steiner labels
  /// are quotiented out, so two topologies are equal iff encodings match.
  std::string encoding() const {
    if (terminals == 0) return "()";
    const auto adj = adjacency();
    std::function<std::string(int, int)> enc = [&](int v, int parent) {
      std::vector<std::string> kids;
      for (int c : adj[v])
        if (c != parent) kids.push_back(enc(c, v));
      std::sort(kids.begin(), kids.end());
      std::string body;
      for (const auto& k : kids) body += "," + k;
      if (v < terminals) {
        if (kids.empty()) return std::to_string(v);
        return "[" + std::to_string(v) + body + "]";
      }
      return "(" + body.substr(body.empty() ? 0 : 1) + ")";
    };
    std::vector<std::string> kids;
    for (int c : adj[0]) kids.push_back(enc(c, 0));
    std::sort(kids.begin(), kids.end());
    std::string out = "(0";
    for (const auto& k : kids) out += "," + k;
    return out + ")";
  }

  /// Relabels Steiner nodes in canonical traversal order and sorts edges.
  SteinerTopology canonical() const {
    const auto adj = adjacency();
    std::vector<int> relabel(node_count(), -1);
    for (int v = 0; v < terminals; ++v) relabel[v] = v;
    int next = terminals;
    std::function<std::string(int, int)> enc_of = [&](int v, int parent) {
      std::vector<std::string> kids;
      for (int c : adj[v])
        if (c != parent) kids.push_back(enc_of(c, v));
      std::sort(kids.begin(), kids.end());
      std::string s = std::to_string(v < terminals ? v : -1);
      for (const auto& k : kids) s += "," + k;
      return "(" + s + ")";
    };
    std::function<void(int, int)> visit = [&](int v, int parent) {
      if (v >= terminals) relabel[v] = next++;
      std::vector<std::pair<std::string, int>> kids;
      for (int c : adj[v])
        if (c != parent) kids.emplace_back(enc_of(c, v), c);
      std::sort(kids.begin(), kids.end());
      for (const auto& [s, c] : kids) visit(c, v);
    };
    if (terminals > 0) visit(0, -1);
    SteinerTopology out{terminals, steiner, {}};
    for (const auto& [a, b] : edges) {
      const int x = relabel[a], y = relabel[b];
      out.edges.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
  }
};

inline constexpr int kDefaultExhaustiveCap = 9;

/// (2n-5)!! for n >= 3.
inline std::uint64_t full_topology_count(int n) {
  std::uint64_t r = 1;
  for (int k = 2 * n - 5; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

/// All full Steiner topologies on n labeled terminals, built by inserting
/// terminal k onto every edge of each topology for k-1 terminals.
inline std::vector<SteinerTopology> enumerate_full_topologies(int n, int cap = kDefaultExhaustiveCap) {
  if (n < 3) throw Error(ErrorKind::OutOfRange, "full topologies need at least 3 terminals");
  if (n > cap) throw Error(ErrorKind::CapExceeded, "n=" + std::to_string(n) + " exceeds exhaustive cap " + std::to_string(cap));
  std::vector<SteinerTopology> out;
  out.reserve(full_topology_count(n));
  SteinerTopology base{n, n - 2, {{0, n}, {1, n}, {2, n}}};
  std::function<void(SteinerTopology&, int)> grow = [&](SteinerTopology& t, int k) {
    if (k == n) {
      out.push_back(t.canonical());
      return;
    }
    const int s = n + (k - 2);
    const std::size_t m = t.edges.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Edge old = t.edges[i];
      t.edges[i] = {old.first, s};
      t.edges.emplace_back(old.second, s);
      t.edges.emplace_back(k, s);
      grow(t, k + 1);
      t.edges.pop_back();
      t.edges.pop_back();
      t.edges[i] = old;
    }
  };
  grow(base, 3);
  return out;
}

/// Every topology reachable by contracting a subset of Steiner-incident edges
/// without merging two terminals; deduplicated, input included.
inline std::vector<SteinerTopology> degenerate_closures(const SteinerTopology& t) {
  if (!t.is_valid()) throw Error(ErrorKind::InvalidTopology, "degenerate_closures of an invalid topology");
  std::vector<int> contractible;
  for (int i = 0; i < static_cast<int>(t.edges.size()); ++i)
    if (!t.is_terminal(t.edges[i].first) || !t.is_terminal(t.edges[i].second)) contractible.push_back(i);
  if (contractible.size() > 24) throw Error(ErrorKind::CapExceeded, "too many contractible edges");

  std::map<std::string, SteinerTopology> seen;
  const int nodes = t.node_count();
  for (std::uint32_t mask = 0; mask < (1u << contractible.size()); ++mask) {
    std::vector<int> parent(nodes);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    std::vector<bool> contracted(t.edges.size(), false);
    bool ok = true;
    for (std::size_t b = 0; b < contractible.size() && ok; ++b) {
      if (!(mask & (1u << b))) continue;
      contracted[contractible[b]] = true;
      int ra = find(t.edges[contractible[b]].first), rb = find(t.edges[contractible[b]].second);
      // Keep the terminal (smaller id) as representative.
      if (ra > rb) std::swap(ra, rb);
      if (ra < t.terminals && rb < t.terminals) ok = false;
      parent[rb] = ra;
    }
    if (!ok) continue;
    std::vector<int> newid(nodes, -1);
    int next = t.terminals;
    for (int v = 0; v < t.terminals; ++v) newid[v] = v;
    for (int v = t.terminals; v < nodes; ++v) {
      const int r = find(v);
      if (r < t.terminals) {
        newid[v] = r;
      } else if (r == v) {
        newid[v] = next++;
      }
    }
    for (int v = t.terminals; v < nodes; ++v) newid[v] = newid[find(v)];
    SteinerTopology c{t.terminals, next - t.terminals, {}};
    for (std::size_t i = 0; i < t.edges.size(); ++i)
      if (!contracted[i]) c.edges.emplace_back(newid[t.edges[i].first], newid[t.edges[i].second]);
    c = c.canonical();
    seen.emplace(c.encoding(), c);
  }
  std::vector<SteinerTopology> out;
  for (auto& [k, v] : seen) out.push_back(std::move(v));
  return out;
}

/// Partition of the point terminals into blocks, each touching a multiset of
/// continua through sliding attachment slots.
struct ForestConfig {
  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<int>> attachments;  ///< continuum ids per block, sorted

  std::string describe() const {
    std::string s;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      s += "{";
      for (std::size_t i = 0; i < blocks[b].size(); ++i) s += (i ? "," : "") + std::to_string(blocks[b][i]);
      s += "|";
      for (std::size_t i = 0; i < attachments[b].size(); ++i)
        s += (i ? "," : "") + std::string("C") + std::to_string(attachments[b][i]);
      s += "}";
    }
    return s.empty() ? "{}" : s;
  }
};

struct ForestCaps {
  int max_blocks = 8;
  int max_attachments_per_block = 2;
  int max_block_terminals = 8;  ///< points + slots in one block
};

struct ForestEnumeration {
  std::vector<ForestConfig> configs;
  bool truncated = false;  ///< some configuration exceeded max_block_terminals
};

/// Admissible forest configurations: blocks listed in order of their smallest
/// point, and blocks together with the continua form one connected set.
inline ForestEnumeration enumerate_forest_configs(int n_points, int n_continua, const ForestCaps& caps = {}) {
  ForestEnumeration out;
  if (n_points < 0 || n_continua < 0) throw Error(ErrorKind::OutOfRange, "negative terminal count");
  if (n_points == 0) {
    if (n_continua <= 1) out.configs.push_back({});
    return out;
  }
  if (n_continua == 0) {
    std::vector<int> all(n_points);
    std::iota(all.begin(), all.end(), 0);
    if (n_points > caps.max_block_terminals) throw Error(ErrorKind::CapExceeded, "single block exceeds terminal cap");
    out.configs.push_back({{all}, {{}}});
    return out;
  }

  // Attachment multisets over continua, sizes 0..max.
  std::vector<std::vector<int>> multisets;
  std::function<void(std::vector<int>&, int)> ms = [&](std::vector<int>& cur, int from) {
    multisets.push_back(cur);
    if (static_cast<int>(cur.size()) == caps.max_attachments_per_block) return;
    for (int c = from; c < n_continua; ++c) {
      cur.push_back(c);
      ms(cur, c);
      cur.pop_back();
    }
  };
  std::vector<int> tmp;
  ms(tmp, 0);

  // Restricted growth strings give each set partition once.
  std::vector<int> rgs(n_points, 0);
  std::function<void(int, int)> partitions = [&](int i, int used) {
    if (i == n_points) {
      if (used > caps.max_blocks) return;
      std::vector<std::vector<int>> blocks(used);
      for (int p = 0; p < n_points; ++p) blocks[rgs[p]].push_back(p);
      std::vector<std::size_t> pick(used, 0);
      std::function<void(int)> choose = [&](int b) {
        if (b == used) {
          ForestConfig cfg{blocks, {}};
          for (int k = 0; k < used; ++k) cfg.attachments.push_back(multisets[pick[k]]);
          // Connectivity of blocks + continua.
          const int nodes = used + n_continua;
          std::vector<int> parent(nodes);
          std::iota(parent.begin(), parent.end(), 0);
          std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
          for (int k = 0; k < used; ++k)
            for (int c : cfg.attachments[k]) parent[find(k)] = find(used + c);
          const int root = find(0);
          for (int v = 1; v < nodes; ++v)
            if (find(v) != root) return;
          for (int k = 0; k < used; ++k)
            if (static_cast<int>(blocks[k].size() + cfg.attachments[k].size()) > caps.max_block_terminals) {
              out.truncated = true;
              return;
            }
          out.configs.push_back(std::move(cfg));
          return;
        }
        for (std::size_t m = 0; m < multisets.size(); ++m) {
          pick[b] = m;
          choose(b + 1);
        }
      };
      choose(0);
      return;
    }
    for (int b = 0; b <= used && b < caps.max_blocks; ++b) {
      rgs[i] = b;
      partitions(i + 1, std::max(used, b + 1));
    }
  };
  partitions(0, 0);
  if (out.configs.empty()) throw Error(ErrorKind::CapExceeded, "no forest configuration fits the caps");
  return out;
}

}  // namespace knotsteiner
