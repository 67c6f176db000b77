#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knotsteiner/continuum.hpp"
#include "knotsteiner/error.hpp"
#include "knotsteiner/topology.hpp"

namespace knotsteiner {

/// Node ids: fixed points [0, F), sliding slots [F, F+S), Steiner [F+S, F+S+K).
/// A slot is a leaf whose position is the point of its continuum closest to
/// its neighbor, so only Steiner positions are free variables.
struct FixedTopologyProblem {
  std::vector<Point3> fixed;
  std::vector<const Continuum*> slots;
  int steiner = 0;
  std::vector<Edge> edges;

  int first_slot() const { return static_cast<int>(fixed.size()); }
  int first_steiner() const { return static_cast<int>(fixed.size() + slots.size()); }
  int node_count() const { return first_steiner() + steiner; }
  bool is_slot(int v) const { return v >= first_slot() && v < first_steiner(); }
  bool is_steiner(int v) const { return v >= first_steiner(); }
};

struct OptimizerOptions {
  std::vector<double> coarse_mu{1e-2, 1e-3};
  std::vector<double> fine_mu{1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
  long max_iterations = 100000;
  double grad_tol = 1e-12;
};

struct FixedTopologyResult {
  std::vector<Point3> positions;  ///< every node; slots hold their attachment point
  std::vector<double> slot_params;
  double length = 0.0;
  double smoothed = 0.0;  ///< smoothed objective at the last stage
  double mu = 0.0;        ///< smoothing of the last stage run
  long iterations = 0;
};

namespace detail {

// In-place Cholesky of a row-major SPD matrix; false if not positive definite.
inline bool cholesky(std::vector<double>& a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (int i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  return true;
}

inline void cholesky_solve(const std::vector<double>& l, int n, std::vector<double>& b) {
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
    b[i] = s / l[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
    b[i] = s / l[i * n + i];
  }
}

}  // namespace detail

class FixedTopologyOptimizer {
 public:
  explicit FixedTopologyOptimizer(FixedTopologyProblem problem, OptimizerOptions options = {})
      : p_(std::move(problem)), opt_(std::move(options)) {
    const int n = p_.node_count();
    std::vector<int> deg(n, 0);
    for (const auto& [a, b] : p_.edges) {
      if (a < 0 || b < 0 || a >= n || b >= n || a == b)
        throw Error(ErrorKind::InvalidTopology, "edge endpoint out of range");
      ++deg[a];
      ++deg[b];
      if (p_.is_slot(a) && p_.is_slot(b)) throw Error(ErrorKind::InvalidTopology, "two slots joined by an edge");
    }
    for (int s = p_.first_slot(); s < p_.first_steiner(); ++s)
      if (deg[s] != 1) throw Error(ErrorKind::InvalidTopology, "attachment slot must be a leaf");
  }

  const FixedTopologyProblem& problem() const { return p_; }
  int variables() const { return 3 * p_.steiner; }
  long iterations() const { return iterations_; }

  Point3 node(const std::vector<double>& x, int v) const {
    if (v < p_.first_slot()) return p_.fixed[v];
    const int k = v - p_.first_steiner();
    return {x[3 * k], x[3 * k + 1], x[3 * k + 2]};
  }

  /// Smoothed length; fills gradient and Hessian (row-major) when requested.
  double evaluate(const std::vector<double>& x, double mu, std::vector<double>* g, std::vector<double>* h) const {
    const int nv = variables();
    if (g) std::fill(g->begin(), g->end(), 0.0);
    if (h) std::fill(h->begin(), h->end(), 0.0);
    double f = 0.0;
    auto var = [&](int v) { return p_.is_steiner(v) ? 3 * (v - p_.first_steiner()) : -1; };
    for (const auto& [a0, b0] : p_.edges) {
      int a = a0, b = b0;
      if (p_.is_slot(a)) std::swap(a, b);
      if (p_.is_slot(b)) {
        const Point3 w = node(x, a);
        const auto t = smoothed_distance(*p_.slots[b - p_.first_slot()], w, mu);
        f += t.value;
        const int ia = var(a);
        if (ia >= 0 && g) {
          for (int r = 0; r < 3; ++r) (*g)[ia + r] += t.grad[r];
          if (h)
            for (int r = 0; r < 3; ++r)
              for (int c = 0; c < 3; ++c) (*h)[(ia + r) * nv + ia + c] += t.hess[r][c];
        }
        continue;
      }
      const Point3 d = node(x, a) - node(x, b);
      const double s = std::sqrt(norm2(d) + mu * mu);
      f += s;
      if (!g) continue;
      const int ia = var(a), ib = var(b);
      const Point3 u = d / s;
      for (int r = 0; r < 3; ++r) {
        if (ia >= 0) (*g)[ia + r] += u[r];
        if (ib >= 0) (*g)[ib + r] -= u[r];
      }
      if (!h) continue;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          const double bl = ((r == c ? 1.0 : 0.0) - u[r] * u[c]) / s;
          if (ia >= 0) (*h)[(ia + r) * nv + ia + c] += bl;
          if (ib >= 0) (*h)[(ib + r) * nv + ib + c] += bl;
          if (ia >= 0 && ib >= 0) {
            (*h)[(ia + r) * nv + ib + c] -= bl;
            (*h)[(ib + r) * nv + ia + c] -= bl;
          }
        }
    }
    return f;
  }

  /// Steiner positions from the graph Laplacian with fixed points and slot
  /// start positions as boundary values.
  std::vector<double> harmonic_start(std::span<const Point3> slot_start) const {
    const int k = p_.steiner;
    std::vector<double> x(3 * k, 0.0);
    if (k == 0) return x;
    std::vector<double> lap(k * k, 0.0);
    std::vector<Point3> rhs(k);
    for (const auto& [a, b] : p_.edges) {
      for (int pass = 0; pass < 2; ++pass) {
        const int u = pass ? b : a, v = pass ? a : b;
        if (!p_.is_steiner(u)) continue;
        const int iu = u - p_.first_steiner();
        lap[iu * k + iu] += 1.0;
        if (p_.is_steiner(v)) {
          lap[iu * k + (v - p_.first_steiner())] -= 1.0;
        } else if (p_.is_slot(v)) {
          rhs[iu] += slot_start[v - p_.first_slot()];
        } else {
          rhs[iu] += p_.fixed[v];
        }
      }
    }
    if (!detail::cholesky(lap, k)) throw Error(ErrorKind::InvalidTopology, "Steiner node not connected to any terminal");
    for (int c = 0; c < 3; ++c) {
      std::vector<double> b(k);
      for (int i = 0; i < k; ++i) b[i] = rhs[i][c];
      detail::cholesky_solve(lap, k, b);
      for (int i = 0; i < k; ++i) x[3 * i + c] = b[i];
    }
    return x;
  }

  std::vector<double> pack(std::span<const Point3> steiner_positions) const {
    std::vector<double> x;
    for (const auto& p : steiner_positions) {
      x.push_back(p.x);
      x.push_back(p.y);
      x.push_back(p.z);
    }
    return x;
  }

  /// Damped Newton on the smoothed length at fixed mu. Returns the final value.
  double minimize(std::vector<double>& x, double mu) {
    const int n = variables();
    if (n == 0) return evaluate(x, mu, nullptr, nullptr);
    std::vector<double> g(n), h(n * n), a(n * n), step(n), xt(n);
    double f = evaluate(x, mu, &g, &h);
    double lambda = 0.0;
    int stall = 0;
    for (;;) {
      if (++iterations_ > opt_.max_iterations)
        throw Error(ErrorKind::NonConvergence, "fixed-topology optimizer hit the iteration cap");
      double gmax = 0.0, dmax = 1.0;
      for (int i = 0; i < n; ++i) {
        gmax = std::max(gmax, std::abs(g[i]));
        dmax = std::max(dmax, std::abs(h[i * n + i]));
      }
      if (gmax < opt_.grad_tol) break;
      bool accepted = false;
      double t = 1.0;
      for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
        a = h;
        for (int i = 0; i < n; ++i) a[i * n + i] += lambda;
        if (!detail::cholesky(a, n)) {
          lambda = std::max(10.0 * lambda, 1e-12 * dmax);
          continue;
        }
        for (int i = 0; i < n; ++i) step[i] = -g[i];
        detail::cholesky_solve(a, n, step);
        double slope = 0.0;
        for (int i = 0; i < n; ++i) slope += g[i] * step[i];
        if (-slope < 4e-16 * std::max(1.0, std::abs(f))) {
          // Predicted decrease below rounding: converged for this stage.
          return f;
        }
        t = 1.0;
        for (int ls = 0; ls < 50; ++ls) {
          for (int i = 0; i < n; ++i) xt[i] = x[i] + t * step[i];
          const double ft = evaluate(xt, mu, nullptr, nullptr);
          if (ft <= f + 1e-4 * t * slope) {
            accepted = true;
            break;
          }
          t *= 0.5;
        }
        if (!accepted) lambda = std::max(10.0 * lambda, 1e-8 * dmax);
      }
      if (!accepted) break;
      if (t == 1.0) lambda = lambda < 1e-14 ? 0.0 : 0.1 * lambda;
      double smax = 0.0;
      for (int i = 0; i < n; ++i) smax = std::max(smax, std::abs(t * step[i]));
      const double fprev = f;
      x = xt;
      f = evaluate(x, mu, &g, &h);
      if (fprev - f <= 1e-16 * std::max(1.0, f) && smax < 1e-15) break;
      // Stiff kinks (an edge collapsed onto a continuum) can stall f at rounding level.
      stall = fprev - f <= 4e-16 * std::max(1.0, std::abs(f)) ? stall + 1 : 0;
      if (stall >= 8) break;
    }
    return f;
  }

  /// Runs the given smoothing stages in order from x.
  double run_stages(std::vector<double>& x, std::span<const double> mus) {
    double f = 0.0;
    for (double mu : mus) f = minimize(x, mu);
    return f;
  }

  FixedTopologyResult finish(const std::vector<double>& x, double smoothed = 0.0, double mu = 0.0) const {
    FixedTopologyResult r;
    r.smoothed = smoothed;
    r.mu = mu;
    r.iterations = iterations_;
    r.positions.resize(p_.node_count());
    for (int v = 0; v < p_.node_count(); ++v)
      if (!p_.is_slot(v)) r.positions[v] = node(x, v);
    r.slot_params.assign(p_.slots.size(), 0.0);
    for (const auto& [a, b] : p_.edges) {
      const int s = p_.is_slot(a) ? a : (p_.is_slot(b) ? b : -1);
      if (s < 0) continue;
      const int w = s == a ? b : a;
      const auto pr = p_.slots[s - p_.first_slot()]->project(r.positions[w]);
      r.positions[s] = pr.point;
      r.slot_params[s - p_.first_slot()] = pr.param;
    }
    for (const auto& [a, b] : p_.edges) r.length += distance(r.positions[a], r.positions[b]);
    return r;
  }

  /// Full continuation from the harmonic start (or a caller's start).
  FixedTopologyResult solve(std::optional<std::vector<Point3>> steiner_start = std::nullopt,
                            std::span<const Point3> slot_start = {}) {
    std::vector<Point3> slots(slot_start.begin(), slot_start.end());
    if (slots.size() < p_.slots.size()) {
      for (std::size_t i = slots.size(); i < p_.slots.size(); ++i) slots.push_back(p_.slots[i]->point_at(0.0));
    }
    std::vector<double> x = steiner_start ? pack(*steiner_start) : harmonic_start(slots);
    double f = run_stages(x, opt_.coarse_mu);
    f = run_stages(x, opt_.fine_mu);
    const double mu = opt_.fine_mu.empty() ? (opt_.coarse_mu.empty() ? 0.0 : opt_.coarse_mu.back()) : opt_.fine_mu.back();
    return finish(x, f, mu);
  }

  const OptimizerOptions& options() const { return opt_; }

 private:
  FixedTopologyProblem p_;
  OptimizerOptions opt_;
  long iterations_ = 0;
};

/// Problem for a topology whose terminals all have fixed positions.
inline FixedTopologyProblem make_problem(const SteinerTopology& t, std::span<const Point3> terminals) {
  if (static_cast<int>(terminals.size()) != t.terminals)
    throw Error(ErrorKind::InvalidTopology, "terminal count does not match topology");
  if (!t.is_valid()) throw Error(ErrorKind::InvalidTopology, "topology is not a valid Steiner tree");
  return {std::vector<Point3>(terminals.begin(), terminals.end()), {}, t.steiner, t.edges};
}

/// Minimum-length embedding of a fixed topology with fixed terminals.
inline FixedTopologyResult optimize_fixed_topology(const SteinerTopology& t, std::span<const Point3> terminals,
                                                   std::optional<std::vector<Point3>> steiner_start = std::nullopt,
                                                   const OptimizerOptions& options = {}) {
  FixedTopologyOptimizer opt(make_problem(t, terminals), options);
  return opt.solve(std::move(steiner_start));
}

}  // namespace knotsteiner
