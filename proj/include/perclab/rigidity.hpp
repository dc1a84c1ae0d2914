#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include "perclab/percolation.hpp"

namespace perclab {

// ---------------------------------------------------------------------------
// Frameworks and the rank test
// ---------------------------------------------------------------------------

using Placement = std::vector<std::array<double, 2>>;

// Uniform placement in [0,1]^2, resampled on the (measure-zero) event of a
// duplicate point.
inline Placement generic_placement(int n, Seed seed) {
  SplitMix64 rng(seed);
  Placement f(n);
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (auto& pt : f) pt = {rng.uniform(), rng.uniform()};
    bool distinct = true;
    for (int i = 0; i < n && distinct; ++i)
      for (int j = i + 1; j < n; ++j)
        if (f[i] == f[j]) {
          distinct = false;
          break;
        }
    if (distinct) return f;
  }
  throw std::runtime_error("generic_placement: could not find injective points");
}

// Rank of the |E| x 2n first-order edge-length constraint matrix: row for
// edge (u,v) holds f(u)-f(v) in u's columns and the negation in v's. The
// framework is infinitesimally rigid iff the rank is 2n-3. Rank is decided by
// singular values above a 1e-9 relative threshold.
inline int rigidity_matrix_rank(const FiniteGraph& g, const Placement& f) {
  if (g.vertex_count < 2)
    throw std::invalid_argument("rigidity_matrix_rank: need n >= 2");
  if (static_cast<int>(f.size()) != g.vertex_count)
    throw std::invalid_argument("rigidity_matrix_rank: placement size mismatch");
  for (int i = 0; i < g.vertex_count; ++i)
    for (int j = i + 1; j < g.vertex_count; ++j)
      if (f[i] == f[j])
        throw std::invalid_argument(
            "rigidity_matrix_rank: degenerate placement, resample");
  const int m = g.edge_count();
  if (m == 0) return 0;
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, 2 * g.vertex_count);
  for (int e = 0; e < m; ++e) {
    auto [u, v] = g.edges[e];
    double dx = f[u][0] - f[v][0];
    double dy = f[u][1] - f[v][1];
    mat(e, 2 * u) = dx;
    mat(e, 2 * u + 1) = dy;
    mat(e, 2 * v) = -dx;
    mat(e, 2 * v + 1) = -dy;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double tol = 1e-9 * std::max(1.0, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank;
}

// Generic rank is the maximum over placements; two independent draws guard
// against an unlucky near-degenerate one.
inline bool is_rigid_by_rank(const FiniteGraph& g, Seed seed) {
  if (g.vertex_count < 2) throw std::invalid_argument("is_rigid_by_rank: n >= 2");
  int rank = 0;
  for (int k = 0; k < 2; ++k)
    rank = std::max(
        rank, rigidity_matrix_rank(g, generic_placement(g.vertex_count,
                                                        derive_seed(seed, k))));
  return rank == 2 * g.vertex_count - 3;
}

// ---------------------------------------------------------------------------
// (2,3)-pebble game
// ---------------------------------------------------------------------------

// Each vertex starts with two pebbles; an edge is accepted when four pebbles
// can be gathered on its endpoints, and acceptance consumes one. The number
// of accepted edges equals the rank of the edge set in the generic 2D
// rigidity matroid. Invariant: out-degree(v) + pebbles(v) = 2 for every v.
class PebbleGame2d {
 public:
  explicit PebbleGame2d(int n)
      : n_(n), pebbles_(n, 2), out_(n), stamp_(n, -1), parent_(n, -1) {}

  int accepted_count() const { return accepted_; }
  int pebbles(int v) const { return pebbles_[v]; }

  // Attempts to insert edge (u,v); returns false when the edge is redundant
  // (dependent on the accepted set).
  bool insert_edge(int u, int v) {
    while (pebbles_[u] + pebbles_[v] < 4)
      if (!pull_pebble(u, v)) return false;
    --pebbles_[u];
    out_[u].push_back(v);
    ++accepted_;
    return true;
  }

  // Vertex set of the maximal rigid component containing the present edge
  // (u,v): gather three pebbles on {u,v}; the component is every vertex with
  // no directed path to a pebble outside {u,v}.
  std::vector<int> component_of_edge(int u, int v) {
    while (pebbles_[u] + pebbles_[v] < 3)
      if (!pull_pebble(u, v))
        throw std::runtime_error("pebble game: cannot gather three pebbles");
    // vertices that can reach a free pebble, by backward search from pebble
    // holders over reversed accepted edges
    std::vector<std::vector<int>> in(n_);
    for (int a = 0; a < n_; ++a)
      for (int b : out_[a]) in[b].push_back(a);
    std::vector<char> reaches(n_, 0);
    std::vector<int> queue;
    for (int w = 0; w < n_; ++w)
      if (pebbles_[w] > 0 && w != u && w != v) {
        reaches[w] = 1;
        queue.push_back(w);
      }
    std::size_t head = 0;
    while (head < queue.size()) {
      int x = queue[head++];
      for (int y : in[x])
        if (!reaches[y]) {
          reaches[y] = 1;
          queue.push_back(y);
        }
    }
    std::vector<int> component;
    for (int w = 0; w < n_; ++w)
      if (!reaches[w]) component.push_back(w);
    return component;
  }

 private:
  // DFS along accepted-edge directions from u (then v) to a vertex holding a
  // pebble; the path is reversed and the pebble moved to the search root.
  bool pull_pebble(int u, int v) {
    for (int root : {u, v}) {
      ++generation_;
      stamp_[root] = generation_;
      parent_[root] = -1;
      std::vector<int> stack{root};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : out_[x]) {
          if (stamp_[y] == generation_) continue;
          stamp_[y] = generation_;
          parent_[y] = x;
          if (pebbles_[y] > 0 && y != u && y != v) {
            reverse_path(root, y);
            --pebbles_[y];
            ++pebbles_[root];
            return true;
          }
          stack.push_back(y);
        }
      }
    }
    return false;
  }

  void reverse_path(int root, int tail) {
    int y = tail;
    while (y != root) {
      int x = parent_[y];
      out_[x].erase(std::find(out_[x].begin(), out_[x].end(), y));
      out_[y].push_back(x);
      y = x;
    }
  }

  int n_;
  int accepted_ = 0;
  std::vector<int> pebbles_;
  std::vector<std::vector<int>> out_;
  std::vector<int> stamp_;
  std::vector<int> parent_;
  int generation_ = 0;
};

// Combinatorial decision of generic 2D rigidity.
inline bool is_generically_rigid_2d(const FiniteGraph& g) {
  if (g.vertex_count < 2)
    throw std::invalid_argument("is_generically_rigid_2d: need n >= 2");
  PebbleGame2d game(g.vertex_count);
  for (auto [u, v] : g.edges) game.insert_edge(u, v);
  return game.accepted_count() == 2 * g.vertex_count - 3;
}

// ---------------------------------------------------------------------------
// Rigid component census
// ---------------------------------------------------------------------------

struct RigidComponent {
  std::vector<int> edges;     // edge indices of g
  std::vector<int> vertices;  // induced, sorted
};

// Partition of the open edges into maximal generically rigid components.
// Two maximal components share at most one vertex, so an open edge belongs to
// a component exactly when both endpoints do.
inline std::vector<RigidComponent> rigid_component_census(const FiniteGraph& g,
                                                          const Configuration& c) {
  check_config(g, c);
  std::vector<int> open_edges;
  for (int e = 0; e < g.edge_count(); ++e)
    if (c.is_open(e)) open_edges.push_back(e);

  std::vector<RigidComponent> components;
  if (open_edges.empty()) return components;

  PebbleGame2d game(g.vertex_count);
  for (int e : open_edges) game.insert_edge(g.edges[e].first, g.edges[e].second);

  std::vector<char> assigned(g.edge_count(), 0);
  std::vector<char> in_component(g.vertex_count, 0);
  for (int e : open_edges) {
    if (assigned[e]) continue;
    RigidComponent comp;
    comp.vertices = game.component_of_edge(g.edges[e].first, g.edges[e].second);
    for (int v : comp.vertices) in_component[v] = 1;
    for (int f : open_edges)
      if (!assigned[f] && in_component[g.edges[f].first] &&
          in_component[g.edges[f].second]) {
        assigned[f] = 1;
        comp.edges.push_back(f);
      }
    for (int v : comp.vertices) in_component[v] = 0;
    // drop vertices not actually covered by the component's edges (the
    // reachability complement may include isolated pebble-less vertices)
    std::vector<char> used(g.vertex_count, 0);
    for (int f : comp.edges) {
      used[g.edges[f].first] = 1;
      used[g.edges[f].second] = 1;
    }
    std::vector<int> vs;
    for (int v : comp.vertices)
      if (used[v]) vs.push_back(v);
    comp.vertices = std::move(vs);
    components.push_back(std::move(comp));
  }
  return components;
}

// ---------------------------------------------------------------------------
// Rigidity percolation on the triangular patch
// ---------------------------------------------------------------------------

struct ThetaRigEstimate {
  Estimate rigidity;      // center in a rigid component touching both sides
  Estimate connectivity;  // center's cluster touching both sides
};

// The square lattice is never rigid (it shears), so rigidity percolation is
// run on the triangular patch only. The rigidity event implies the
// connectivity event configuration by configuration.
inline ThetaRigEstimate estimate_theta_rig(const LatticeSpec& spec, double p,
                                           int replicas, Seed seed) {
  if (!std::holds_alternative<Triangular>(spec))
    throw std::invalid_argument(
        "estimate_theta_rig: the hypercubic lattice is not rigid; "
        "use the triangular lattice");
  if (replicas < 1) throw std::invalid_argument("replicas < 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("probability out of range");
  const int L = std::get<Triangular>(spec).side;
  FiniteGraph g = build_graph(spec);
  const int center = (L / 2) * L + (L / 2);

  std::int64_t rig_hits = 0, conn_hits = 0;
  for (int r = 0; r < replicas; ++r) {
    Configuration c = sample_bernoulli(g, p, derive_seed(seed, r));

    ClusterLabels labels = cluster_decomposition(g, c);
    int cid = labels.component_id[center];
    bool left = false, right = false;
    for (int v = 0; v < g.vertex_count; ++v)
      if (labels.component_id[v] == cid) {
        if (g.coords[v][0] == 0) left = true;
        if (g.coords[v][0] == L - 1) right = true;
      }
    if (left && right) {
      ++conn_hits;
      // a rigid spanning component containing the center can only live
      // inside a spanning cluster containing the center
      for (const RigidComponent& comp : rigid_component_census(g, c)) {
        bool has_center = false, cl = false, cr = false;
        for (int v : comp.vertices) {
          if (v == center) has_center = true;
          if (g.coords[v][0] == 0) cl = true;
          if (g.coords[v][0] == L - 1) cr = true;
        }
        if (has_center && cl && cr) {
          ++rig_hits;
          break;
        }
      }
    }
  }
  return {binomial_estimate(rig_hits, replicas),
          binomial_estimate(conn_hits, replicas)};
}

struct ThetaRigRow {
  double p;
  ThetaRigEstimate estimate;
};

inline std::vector<ThetaRigRow> theta_rig_scan(int side,
                                               const std::vector<double>& p_grid,
                                               int replicas, Seed seed) {
  std::vector<ThetaRigRow> rows;
  LatticeSpec spec = Triangular{side};
  for (std::size_t i = 0; i < p_grid.size(); ++i)
    rows.push_back(
        {p_grid[i], estimate_theta_rig(spec, p_grid[i], replicas,
                                       derive_seed(seed, i))});
  return rows;
}

// Linear interpolation of the p at which an estimator column crosses 1/2.
// Returns the crossing abscissa and a delta-method standard error.
inline Estimate pivot_from_scan(const std::vector<double>& ps,
                                const std::vector<Estimate>& estimates) {
  if (ps.size() != estimates.size() || ps.size() < 2)
    throw std::invalid_argument("pivot_from_scan: bad input");
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    double a = estimates[i].value, b = estimates[i + 1].value;
    if (a < 0.5 && b >= 0.5) {
      double slope = (b - a) / (ps[i + 1] - ps[i]);
      double t = (0.5 - a) / (b - a);
      double p_star = ps[i] + t * (ps[i + 1] - ps[i]);
      double se_val =
          std::sqrt(estimates[i].se * estimates[i].se * (1 - t) * (1 - t) +
                    estimates[i + 1].se * estimates[i + 1].se * t * t);
      double se = slope > 0 ? se_val / slope : se_val;
      return {p_star, se};
    }
  }
  throw std::runtime_error("pivot_from_scan: no crossing of 1/2 in the grid");
}

}  // namespace perclab
