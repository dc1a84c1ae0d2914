#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "perclab/percolation.hpp"

namespace perclab {

// ---------------------------------------------------------------------------
// Trifurcation census
// ---------------------------------------------------------------------------

struct TrifurcationReport {
  VertexSet trifurcation_vertices;
  int count = 0;
  int boundary_size = 0;
};

namespace detail {

// BFS over open edges from `start`, with `removed` treated as absent.
// Returns false the moment one of the `avoid` vertices is reached; otherwise
// fills `reached_boundary`. Visited stamps are shared across calls.
inline bool grow_cluster_avoiding(const FiniteGraph& g, const Configuration& c,
                                  int start, int removed, int avoid1, int avoid2,
                                  std::vector<int>& stamp, int generation,
                                  std::vector<int>& queue, bool& reached_boundary) {
  queue.clear();
  queue.push_back(start);
  stamp[start] = generation;
  reached_boundary = g.is_boundary[start] != 0;
  std::size_t head = 0;
  while (head < queue.size()) {
    int v = queue[head++];
    for (auto [nb, e] : g.adjacency[v]) {
      if (!c.is_open(e) || nb == removed) continue;
      if (nb == avoid1 || nb == avoid2) return false;
      if (stamp[nb] == generation) continue;
      stamp[nb] = generation;
      if (g.is_boundary[nb]) reached_boundary = true;
      queue.push_back(nb);
    }
  }
  return true;
}

}  // namespace detail

// A vertex qualifies iff it is interior, has exactly three incident open
// edges, and removing it (with those edges) leaves three pairwise-disjoint
// open clusters, each reaching the box boundary. The three boundary contacts
// are what makes the deterministic count bound below work.
inline TrifurcationReport box_trifurcations(const FiniteGraph& g,
                                            const Configuration& c) {
  check_config(g, c);
  if (!g.spec || !is_box_spec(*g.spec))
    throw std::invalid_argument("box_trifurcations: graph is not a box");
  if (static_cast<int>(g.boundary.size()) == g.vertex_count)
    throw std::invalid_argument("box_trifurcations: box has empty interior");

  TrifurcationReport report;
  report.boundary_size = static_cast<int>(g.boundary.size());

  std::vector<int> stamp(g.vertex_count, -1);
  std::vector<int> queue;
  int generation = 0;

  for (int x = 0; x < g.vertex_count; ++x) {
    if (g.is_boundary[x]) continue;
    int nbrs[3];
    int open_degree = 0;
    for (auto [nb, e] : g.adjacency[x]) {
      if (!c.is_open(e)) continue;
      if (open_degree < 3) nbrs[open_degree] = nb;
      ++open_degree;
      if (open_degree > 3) break;
    }
    if (open_degree != 3) continue;

    bool b0 = false, b1 = false, b2 = false;
    if (!detail::grow_cluster_avoiding(g, c, nbrs[0], x, nbrs[1], nbrs[2], stamp,
                                       ++generation, queue, b0) ||
        !b0)
      continue;
    if (!detail::grow_cluster_avoiding(g, c, nbrs[1], x, nbrs[2], -1, stamp,
                                       ++generation, queue, b1) ||
        !b1)
      continue;
    if (!detail::grow_cluster_avoiding(g, c, nbrs[2], x, -1, -1, stamp,
                                       ++generation, queue, b2) ||
        !b2)
      continue;
    report.trifurcation_vertices.push_back(x);
  }
  report.count = static_cast<int>(report.trifurcation_vertices.size());
  return report;
}

// The counting lemma: each trifurcation claims a distinct boundary vertex, so
// the census can never exceed the boundary size, whatever the configuration.
inline bool check_burton_keane_bound(const TrifurcationReport& report) {
  return report.count <= report.boundary_size;
}

// ---------------------------------------------------------------------------
// Spanning-cluster counts
// ---------------------------------------------------------------------------

struct SpanningCriterion {
  enum Kind { TwoOppositeFaces, BoundaryTouchMinSize } kind = TwoOppositeFaces;
  int min_size = 1;

  static SpanningCriterion two_opposite_faces() { return {TwoOppositeFaces, 1}; }
  static SpanningCriterion boundary_touch(int min_size) {
    return {BoundaryTouchMinSize, min_size};
  }
};

// Number of distinct open clusters meeting the criterion: either touching
// both the x=0 and x=L-1 faces, or touching the boundary with at least
// min_size vertices.
inline int spanning_cluster_count(const FiniteGraph& g, const Configuration& c,
                                  const SpanningCriterion& criterion) {
  check_config(g, c);
  ClusterLabels labels = cluster_decomposition(g, c);
  int count = 0;
  if (criterion.kind == SpanningCriterion::TwoOppositeFaces) {
    if (!g.spec || !is_box_spec(*g.spec))
      throw std::invalid_argument("two-opposite-faces criterion needs a box");
    const int L = detail::box_side(*g.spec);
    std::vector<std::uint8_t> touches(g.vertex_count, 0);
    for (int v = 0; v < g.vertex_count; ++v) {
      if (g.coords[v][0] == 0) touches[labels.component_id[v]] |= 1;
      if (g.coords[v][0] == L - 1) touches[labels.component_id[v]] |= 2;
    }
    for (int id : labels.ids)
      if (touches[id] == 3) ++count;
  } else {
    if (criterion.min_size < 1)
      throw std::invalid_argument("boundary-touch criterion: min_size < 1");
    std::vector<char> touches(g.vertex_count, 0);
    for (int v : g.boundary) touches[labels.component_id[v]] = 1;
    for (int id : labels.ids)
      if (touches[id] && labels.component_size[id] >= criterion.min_size) ++count;
  }
  return count;
}

struct PhaseScanRow {
  double p = 0.0;
  double mean_spanning_clusters = 0.0;
  double se = 0.0;
};

using PhaseScanResult = std::vector<PhaseScanRow>;

inline PhaseScanResult phase_scan(const LatticeSpec& spec,
                                  const std::vector<double>& p_grid,
                                  const SpanningCriterion& criterion, int replicas,
                                  Seed seed) {
  if (replicas < 1) throw std::invalid_argument("replicas < 1");
  FiniteGraph g = build_graph(spec);
  PhaseScanResult result;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    std::vector<double> counts;
    counts.reserve(replicas);
    Seed row_seed = derive_seed(seed, i);
    for (int r = 0; r < replicas; ++r) {
      Configuration c = sample_bernoulli(g, p_grid[i], derive_seed(row_seed, r));
      counts.push_back(spanning_cluster_count(g, c, criterion));
    }
    Estimate e = mean_estimate(counts);
    result.push_back({p_grid[i], e.value, e.se});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Tree cluster proliferation
// ---------------------------------------------------------------------------

// Mean number of disjoint open clusters of the depth-truncated binary tree
// containing a downward open path spanning strictly more than half the tree
// depth (length >= floor(depth/2)+1). On the tree each cluster is a subtree
// with a unique top, so the count is one pass over component extents.
inline Estimate tree_cluster_proliferation(int depth, double p, int replicas,
                                           Seed seed) {
  FiniteGraph g = build_graph(LatticeSpec{BinaryTree{depth}});
  const int threshold = depth / 2 + 1;
  std::vector<double> counts;
  counts.reserve(replicas);
  for (int r = 0; r < replicas; ++r) {
    Configuration c = sample_bernoulli(g, p, derive_seed(seed, r));
    ClusterLabels labels = cluster_decomposition(g, c);
    // canonical id = minimal vertex = the cluster's top in level order
    std::vector<int> max_level(g.vertex_count, -1);
    for (int v = 0; v < g.vertex_count; ++v) {
      int id = labels.component_id[v];
      if (g.coords[v][0] > max_level[id]) max_level[id] = g.coords[v][0];
    }
    int qualifying = 0;
    for (int id : labels.ids)
      if (max_level[id] - g.coords[id][0] >= threshold) ++qualifying;
    counts.push_back(qualifying);
  }
  return mean_estimate(counts);
}

// ---------------------------------------------------------------------------
// Finite-energy probe
// ---------------------------------------------------------------------------

struct FiniteEnergyResult {
  enum Status { Ok, Inconclusive } status = Inconclusive;
  double frequency = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  int matches = 0;
  // with conclusive data, a conditional frequency pinned at 0 or 1
  bool violation = false;
};

// Empirical frequency of edge e being open among samples that agree with the
// reference pattern on every other edge. Exact-match conditioning only works
// on small graphs; larger ones are rejected outright.
template <class Sampler>
FiniteEnergyResult finite_energy_check(Sampler&& sampler, int edge_count, int e,
                                       const Configuration& reference,
                                       int conditioning_replicas, Seed seed,
                                       int min_matches = 25) {
  if (edge_count > 12)
    throw std::invalid_argument(
        "finite_energy_check: exact-match conditioning needs <= 12 edges");
  if (e < 0 || e >= edge_count)
    throw std::invalid_argument("finite_energy_check: edge out of range");
  if (reference.size() != edge_count)
    throw std::invalid_argument("finite_energy_check: reference length mismatch");

  int matches = 0, open = 0;
  for (int r = 0; r < conditioning_replicas; ++r) {
    Configuration c = sampler(derive_seed(seed, r));
    bool agree = true;
    for (int j = 0; j < edge_count; ++j)
      if (j != e && c.is_open(j) != reference.is_open(j)) {
        agree = false;
        break;
      }
    if (!agree) continue;
    ++matches;
    if (c.is_open(e)) ++open;
  }

  FiniteEnergyResult out;
  out.matches = matches;
  if (matches < min_matches) return out;
  Estimate est = binomial_estimate(open, matches);
  out.status = FiniteEnergyResult::Ok;
  out.frequency = est.value;
  out.ci_low = est.ci_low();
  out.ci_high = est.ci_high();
  out.violation = (est.value == 0.0 || est.value == 1.0);
  return out;
}

}  // namespace perclab
