#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/rng.hpp"
#include "perclab/stats.hpp"
#include "perclab/union_find.hpp"

namespace perclab {

// ---------------------------------------------------------------------------
// Configurations and clusters
// ---------------------------------------------------------------------------

// One open/closed flag per edge index.
struct Configuration {
  std::vector<std::uint8_t> open;

  int size() const { return static_cast<int>(open.size()); }
  bool is_open(int e) const { return open[e] != 0; }
  int open_count() const {
    int c = 0;
    for (auto b : open) c += b;
    return c;
  }
};

// Per-vertex component labels over open edges. The id of a component is the
// smallest vertex index it contains, which makes labels canonical.
struct ClusterLabels {
  std::vector<int> component_id;          // per vertex
  std::vector<std::int64_t> component_size;  // indexed by canonical id; 0 elsewhere
  std::vector<int> ids;                   // sorted distinct canonical ids

  int count() const { return static_cast<int>(ids.size()); }
};

inline void check_config(const FiniteGraph& g, const Configuration& c) {
  if (c.size() != g.edge_count())
    throw std::invalid_argument("configuration length does not match edge count");
}

// Each edge open independently with probability p. One uniform is drawn per
// edge in edge order, so two samples with the same seed are coupled: raising
// p can only add open edges.
inline Configuration sample_bernoulli(const FiniteGraph& g, double p, Seed seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("probability out of range");
  SplitMix64 rng(seed);
  Configuration c;
  c.open.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    c.open[e] = rng.uniform() < p ? 1 : 0;
  return c;
}

inline ClusterLabels cluster_decomposition(const FiniteGraph& g,
                                           const Configuration& c) {
  check_config(g, c);
  DisjointSets dsu(g.vertex_count);
  for (int e = 0; e < g.edge_count(); ++e)
    if (c.is_open(e)) dsu.unite(g.edges[e].first, g.edges[e].second);

  ClusterLabels labels;
  labels.component_id.assign(g.vertex_count, -1);
  labels.component_size.assign(g.vertex_count, 0);
  // vertices scanned in increasing order, so the first visit to a root fixes
  // the canonical (minimal) id
  std::vector<int> canonical(g.vertex_count, -1);
  for (int v = 0; v < g.vertex_count; ++v) {
    int r = dsu.find(v);
    if (canonical[r] < 0) {
      canonical[r] = v;
      labels.ids.push_back(v);
    }
    labels.component_id[v] = canonical[r];
    labels.component_size[canonical[r]] += 1;
  }
  return labels;
}

inline bool connects(const ClusterLabels& labels, int x, int y) {
  return labels.component_id[x] == labels.component_id[y];
}

// ---------------------------------------------------------------------------
// Crossing events and the critical-point pivot
// ---------------------------------------------------------------------------

namespace detail {

inline int box_side(const LatticeSpec& spec) {
  if (auto* h = std::get_if<Hypercubic>(&spec)) return h->side;
  if (auto* t = std::get_if<Triangular>(&spec)) return t->side;
  throw std::invalid_argument("box side requested for a non-box spec");
}

// Open path from the x=0 face to the x=L-1 face.
inline bool has_left_right_crossing(const FiniteGraph& g, const Configuration& c,
                                    ClusterLabels& scratch) {
  scratch = cluster_decomposition(g, c);
  const int L = box_side(*g.spec);
  std::vector<char> left_ids(g.vertex_count, 0);
  for (int v = 0; v < g.vertex_count; ++v)
    if (g.coords[v][0] == 0) left_ids[scratch.component_id[v]] = 1;
  for (int v = 0; v < g.vertex_count; ++v)
    if (g.coords[v][0] == L - 1 && left_ids[scratch.component_id[v]]) return true;
  return false;
}

// Number of deepest-level vertices in the root's open cluster. Its mean is
// (2p)^depth, which crosses 1 exactly at p = 1/2 for every depth.
inline int tree_leaf_lines_from_root(const FiniteGraph& g, const Configuration& c) {
  const int depth = std::get<BinaryTree>(*g.spec).depth;
  const int first_leaf = (1 << depth) - 1;
  std::vector<int> stack{0};
  std::vector<char> seen(g.vertex_count, 0);
  seen[0] = 1;
  int leaves = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v >= first_leaf) ++leaves;
    for (auto [nb, e] : g.adjacency[v])
      if (c.is_open(e) && !seen[nb]) {
        seen[nb] = 1;
        stack.push_back(nb);
      }
  }
  return leaves;
}

}  // namespace detail

// Fraction of replicas whose configuration contains an open crossing from the
// left face to the right face of the box. Finite-size stand-in for the
// existence of an unbounded cluster.
inline Estimate crossing_probability(const LatticeSpec& spec, double p,
                                     int replicas, Seed seed) {
  if (!is_box_spec(spec))
    throw std::invalid_argument("crossing_probability: spec is not a box");
  if (replicas < 1) throw std::invalid_argument("replicas < 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("probability out of range");
  FiniteGraph g = build_graph(spec);
  ClusterLabels scratch;
  std::int64_t hits = 0;
  for (int r = 0; r < replicas; ++r) {
    Configuration c = sample_bernoulli(g, p, derive_seed(seed, r));
    if (detail::has_left_right_crossing(g, c, scratch)) ++hits;
  }
  return binomial_estimate(hits, replicas);
}

// Mean number of deepest-level tree vertices connected to the root.
inline Estimate tree_leaf_line_count(const BinaryTree& spec, double p,
                                     int replicas, Seed seed) {
  if (replicas < 1) throw std::invalid_argument("replicas < 1");
  FiniteGraph g = build_graph(LatticeSpec{spec});
  std::vector<double> counts;
  counts.reserve(replicas);
  for (int r = 0; r < replicas; ++r) {
    Configuration c = sample_bernoulli(g, p, derive_seed(seed, r));
    counts.push_back(detail::tree_leaf_lines_from_root(g, c));
  }
  return mean_estimate(counts);
}

struct PcEstimate {
  double p_hat = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  bool converged = false;
  int evaluations = 0;
};

// Bisection on p of a monotone pivot statistic:
//   - boxes: left-right crossing probability, target 1/2;
//   - binary trees: mean root-connected deepest-level count, target 1
//     (branching criticality; this pivot is depth-unbiased, unlike a survival
//     probability threshold, whose finite-depth pivot converges to the wrong
//     constant).
// If the pivot already sits on one side of the target over [p_lo, p_hi], the
// corresponding bracket edge is returned.
inline PcEstimate estimate_pc(const LatticeSpec& spec, int replicas,
                              double tolerance, Seed seed, double p_lo = 0.0,
                              double p_hi = 1.0) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(p_lo >= 0.0 && p_hi <= 1.0 && p_lo < p_hi))
    throw std::invalid_argument("invalid p interval");
  if (!is_box_spec(spec) && !std::holds_alternative<BinaryTree>(spec))
    throw std::invalid_argument(
        "estimate_pc: supported specs are boxes and binary trees");

  double target = is_box_spec(spec) ? 0.5 : 1.0;
  int eval_index = 0;
  auto pivot = [&](double p) {
    Seed s = derive_seed(seed, eval_index++);
    if (is_box_spec(spec)) return crossing_probability(spec, p, replicas, s).value;
    return tree_leaf_line_count(std::get<BinaryTree>(spec), p, replicas, s).value;
  };

  PcEstimate out;
  double lo = p_lo, hi = p_hi;
  double f_lo = pivot(lo);
  if (f_lo >= target) {
    out = {lo, lo, lo, true, eval_index};
    return out;
  }
  double f_hi = pivot(hi);
  if (f_hi <= target) {
    out = {hi, hi, hi, true, eval_index};
    return out;
  }
  constexpr int kMaxIterations = 64;
  int it = 0;
  while (hi - lo > tolerance && it < kMaxIterations) {
    double mid = 0.5 * (lo + hi);
    if (pivot(mid) < target)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  out.p_hat = 0.5 * (lo + hi);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.converged = (hi - lo) <= tolerance;
  out.evaluations = eval_index;
  return out;
}

}  // namespace perclab
