#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knotsteiner/error.hpp"
#include "knotsteiner/point.hpp"

namespace knotsteiner {

enum class VertexRole { Terminal, Steiner, Attachment };

inline const char* to_string(VertexRole r) {
  switch (r) {
    case VertexRole::Terminal: return "terminal";
    case VertexRole::Steiner: return "steiner";
    case VertexRole::Attachment: return "attachment";
  }
  return "?";
}

inline VertexRole role_from_string(const std::string& s) {
  if (s == "terminal") return VertexRole::Terminal;
  if (s == "steiner") return VertexRole::Steiner;
  if (s == "attachment") return VertexRole::Attachment;
  throw Error(ErrorKind::Io, "unknown vertex role '" + s + "'");
}

struct GraphVertex {
  int id = 0;
  Point3 xyz;
  VertexRole role = VertexRole::Terminal;
  std::string label;
};

/// Where an attachment vertex sits on a continuum terminal.
struct Attachment {
  std::string continuum;
  double param = 0.0;
  int vertex = -1;
};

using Edge = std::pair<int, int>;

/// A connecting graph realized in space. Vertex ids equal their index.
struct EmbeddedGraph {
  std::vector<GraphVertex> vertices;
  std::vector<Edge> edges;
  double length = 0.0;
  std::vector<Attachment> attachments;

  int add_vertex(const Point3& p, VertexRole role, std::string label = {}) {
    const int id = static_cast<int>(vertices.size());
    vertices.push_back({id, p, role, std::move(label)});
    return id;
  }

  double edge_length(const Edge& e) const {
    return distance(vertices[e.first].xyz, vertices[e.second].xyz);
  }

  double compute_length() const {
    double s = 0.0;
    for (const auto& e : edges) s += edge_length(e);
    return s;
  }

  void update_length() { length = compute_length(); }

  std::vector<int> degrees() const {
    std::vector<int> deg(vertices.size(), 0);
    for (const auto& [a, b] : edges) {
      ++deg[a];
      ++deg[b];
    }
    return deg;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  std::size_t count(VertexRole r) const {
    return static_cast<std::size_t>(std::count_if(vertices.begin(), vertices.end(),
                                                  [r](const GraphVertex& v) { return v.role == r; }));
  }

  std::optional<int> find_label(const std::string& label) const {
    for (const auto& v : vertices)
      if (v.label == label) return v.id;
    return std::nullopt;
  }

  /// Number of connected components, counting isolated vertices.
  int component_count() const {
    std::vector<int> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    int comps = static_cast<int>(vertices.size());
    for (const auto& [a, b] : edges) {
      const int ra = find(a), rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --comps;
      }
    }
    return comps;
  }

  bool is_tree() const {
    return !vertices.empty() && edges.size() + 1 == vertices.size() && component_count() == 1;
  }

  /// Drops vertices that no edge touches, except those with a kept role.
  void drop_isolated(VertexRole keep = VertexRole::Terminal) {
    const auto deg = degrees();
    std::vector<int> remap(vertices.size(), -1);
    std::vector<GraphVertex> kept;
    for (const auto& v : vertices) {
      if (deg[v.id] == 0 && v.role != keep) continue;
      remap[v.id] = static_cast<int>(kept.size());
      kept.push_back(v);
      kept.back().id = remap[v.id];
    }
    for (auto& [a, b] : edges) {
      a = remap[a];
      b = remap[b];
    }
    std::vector<Attachment> att;
    for (auto a : attachments)
      if (remap[a.vertex] >= 0) {
        a.vertex = remap[a.vertex];
        att.push_back(a);
      }
    vertices = std::move(kept);
    attachments = std::move(att);
  }
};

}  // namespace knotsteiner
