#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "perclab/percolation.hpp"

namespace perclab {

// ---------------------------------------------------------------------------
// Random-cluster model on a finite graph
// ---------------------------------------------------------------------------

// Free: plain component count. Wired: the graph's boundary vertices are fused
// into one super-vertex before counting, which is what an all-open exterior
// does to the clusters that meet the box.
enum class Boundary : int { Free = 0, Wired = 1 };

struct RCParams {
  double p = 0.5;
  double q = 1.0;
  Boundary b = Boundary::Free;
  int sweeps = 10;     // spacing between retained samples
  int burn_in = 1000;  // discarded sweeps before the first sample

  void validate_exact() const {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("probability out of range");
    if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  }
  void validate_sampler() const {
    validate_exact();
    if (q < 1.0)
      throw std::invalid_argument("heat-bath sampler requires q >= 1");
    if (sweeps < 1 || burn_in < 0)
      throw std::invalid_argument("invalid sweep counts");
  }
};

struct RCState {
  Configuration config;
  Boundary b = Boundary::Free;
  int cluster_count = 0;
};

// Component count with the boundary fused under wired conditions.
inline int rc_cluster_count(const FiniteGraph& g, const Configuration& c,
                            Boundary b) {
  check_config(g, c);
  DisjointSets dsu(g.vertex_count);
  if (b == Boundary::Wired)
    for (std::size_t i = 1; i < g.boundary.size(); ++i)
      dsu.unite(g.boundary[0], g.boundary[i]);
  for (int e = 0; e < g.edge_count(); ++e)
    if (c.is_open(e)) dsu.unite(g.edges[e].first, g.edges[e].second);
  return dsu.count();
}

inline RCState make_rc_state(const FiniteGraph& g, const Configuration& c,
                             Boundary b) {
  return {c, b, rc_cluster_count(g, c, b)};
}

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

// Probability of each configuration, indexed by edge bitmask (bit e = edge e
// open), proportional to prod_e p^w(e) (1-p)^(1-w(e)) * q^k(w).
inline std::vector<double> exact_rc_distribution(const FiniteGraph& g, double p,
                                                 double q, Boundary b) {
  RCParams params{p, q, b, 1, 0};
  params.validate_exact();
  const int m = g.edge_count();
  if (m > 20)
    throw std::invalid_argument("exact_rc_distribution: more than 20 edges");
  const std::size_t n_configs = std::size_t{1} << m;
  std::vector<double> weight(n_configs);
  Configuration c;
  c.open.assign(m, 0);
  double z = 0.0;
  for (std::size_t mask = 0; mask < n_configs; ++mask) {
    int open = 0;
    for (int e = 0; e < m; ++e) {
      c.open[e] = (mask >> e) & 1u;
      open += c.open[e];
    }
    double w = std::pow(p, open) * std::pow(1.0 - p, m - open) *
               std::pow(q, rc_cluster_count(g, c, b));
    weight[mask] = w;
    z += w;
  }
  if (!(z > 0.0)) throw std::runtime_error("exact_rc_distribution: zero mass");
  for (double& w : weight) w /= z;
  return weight;
}

// ---------------------------------------------------------------------------
// Single-edge heat-bath dynamics
// ---------------------------------------------------------------------------

namespace detail {

// Are the endpoints of edge e joined by an open path avoiding e? Under wired
// conditions the boundary acts as one vertex: touching it from both sides
// counts as connected. Scratch buffers avoid per-call allocation.
struct ConnectivityScratch {
  std::vector<int> stamp;
  std::vector<int> queue;
  int generation = 0;
};

inline bool endpoints_connected_without(const FiniteGraph& g,
                                        const Configuration& c, int e, Boundary b,
                                        ConnectivityScratch& scratch) {
  const auto [u, v] = g.edges[e];
  if (scratch.stamp.size() != static_cast<std::size_t>(g.vertex_count))
    scratch.stamp.assign(g.vertex_count, -1);
  const int gen = ++scratch.generation;
  auto& stamp = scratch.stamp;
  auto& queue = scratch.queue;
  queue.clear();
  bool boundary_expanded = false;

  auto push = [&](int w) {
    if (stamp[w] != gen) {
      stamp[w] = gen;
      queue.push_back(w);
    }
  };
  push(u);
  std::size_t head = 0;
  while (head < queue.size()) {
    int x = queue[head++];
    if (x == v) return true;
    if (b == Boundary::Wired && g.is_boundary[x] && !boundary_expanded) {
      boundary_expanded = true;
      for (int w : g.boundary) push(w);
      continue;
    }
    for (auto [nb, f] : g.adjacency[x])
      if (f != e && c.is_open(f)) push(nb);
  }
  return false;
}

}  // namespace detail

// Conditional probability that e is open given every other edge: p when the
// endpoints are already joined elsewhere (the cluster count cannot change),
// p / (p + (1-p) q) when closing e would split a cluster. Both branches equal
// p at q = 1.
inline double single_edge_conditional(const FiniteGraph& g,
                                      const Configuration& c, int e,
                                      const RCParams& params) {
  params.validate_exact();
  detail::ConnectivityScratch scratch;
  bool joined = detail::endpoints_connected_without(g, c, e, params.b, scratch);
  return joined ? params.p : params.p / (params.p + (1.0 - params.p) * params.q);
}

// Markov chain with the exact distribution above as its stationary law.
class RcChain {
 public:
  RcChain(const FiniteGraph& g, const RCParams& params, Seed seed)
      : graph_(&g), params_(params), rng_(seed) {
    params_.validate_sampler();
    state_.config.open.assign(g.edge_count(), 0);
    state_.b = params.b;
    state_.cluster_count = rc_cluster_count(g, state_.config, params.b);
  }

  // One sweep: every edge resampled once, in fixed edge order.
  void sweep() {
    const FiniteGraph& g = *graph_;
    for (int e = 0; e < g.edge_count(); ++e) {
      double prob;
      if (params_.q == 1.0) {
        prob = params_.p;  // conditionals are unconditional
      } else {
        bool joined = detail::endpoints_connected_without(g, state_.config, e,
                                                          params_.b, scratch_);
        prob = joined ? params_.p
                      : params_.p / (params_.p + (1.0 - params_.p) * params_.q);
      }
      state_.config.open[e] = rng_.uniform() < prob ? 1 : 0;
    }
    state_.cluster_count = rc_cluster_count(g, state_.config, params_.b);
  }

  void run(int sweeps) {
    for (int i = 0; i < sweeps; ++i) sweep();
  }

  const RCState& state() const { return state_; }
  const Configuration& config() const { return state_.config; }

 private:
  const FiniteGraph* graph_;
  RCParams params_;
  SplitMix64 rng_;
  RCState state_;
  detail::ConnectivityScratch scratch_;
};

inline void heat_bath_sweep(const FiniteGraph& g, RCState& state,
                            const RCParams& params, SplitMix64& rng) {
  RCParams p = params;
  p.b = state.b;
  p.validate_sampler();
  detail::ConnectivityScratch scratch;
  for (int e = 0; e < g.edge_count(); ++e) {
    double prob;
    if (p.q == 1.0) {
      prob = p.p;
    } else {
      bool joined =
          detail::endpoints_connected_without(g, state.config, e, p.b, scratch);
      prob = joined ? p.p : p.p / (p.p + (1.0 - p.p) * p.q);
    }
    state.config.open[e] = rng.uniform() < prob ? 1 : 0;
  }
  state.cluster_count = rc_cluster_count(g, state.config, state.b);
}

// One configuration after burn_in sweeps from the all-closed start.
inline Configuration sample_rc(const FiniteGraph& g, const RCParams& params,
                               Seed seed) {
  RcChain chain(g, params, seed);
  chain.run(params.burn_in);
  return chain.config();
}

// Connectivity of x and y in the open subgraph, with the wired boundary
// acting as a single vertex (a path may close through the exterior).
inline bool rc_connects(const FiniteGraph& g, const Configuration& c, int x,
                        int y, Boundary b) {
  if (x == y) return true;
  DisjointSets dsu(g.vertex_count);
  if (b == Boundary::Wired)
    for (std::size_t i = 1; i < g.boundary.size(); ++i)
      dsu.unite(g.boundary[0], g.boundary[i]);
  for (int e = 0; e < g.edge_count(); ++e)
    if (c.is_open(e)) dsu.unite(g.edges[e].first, g.edges[e].second);
  return dsu.same(x, y);
}

// Fraction of retained samples with x connected to y. One chain: burn_in
// sweeps, then `replicas` samples spaced params.sweeps apart.
inline Estimate two_point_estimate(const FiniteGraph& g, const RCParams& params,
                                   int x, int y, int replicas, Seed seed) {
  if (replicas < 1) throw std::invalid_argument("replicas < 1");
  if (x < 0 || y < 0 || x >= g.vertex_count || y >= g.vertex_count)
    throw std::invalid_argument("two_point_estimate: vertex out of range");
  RcChain chain(g, params, seed);
  chain.run(params.burn_in);
  std::int64_t hits = 0;
  for (int r = 0; r < replicas; ++r) {
    chain.run(params.sweeps);
    if (rc_connects(g, chain.config(), x, y, params.b)) ++hits;
  }
  return binomial_estimate(hits, replicas);
}

// Empirical configuration frequencies from one chain; comparable directly
// against exact_rc_distribution.
inline std::vector<double> rc_empirical_distribution(const FiniteGraph& g,
                                                     const RCParams& params,
                                                     int samples, Seed seed) {
  const int m = g.edge_count();
  if (m > 20) throw std::invalid_argument("empirical distribution: > 20 edges");
  if (samples < 1) throw std::invalid_argument("samples < 1");
  std::vector<double> freq(std::size_t{1} << m, 0.0);
  RcChain chain(g, params, seed);
  chain.run(params.burn_in);
  for (int s = 0; s < samples; ++s) {
    chain.run(params.sweeps);
    std::size_t mask = 0;
    const Configuration& c = chain.config();
    for (int e = 0; e < m; ++e)
      if (c.is_open(e)) mask |= std::size_t{1} << e;
    freq[mask] += 1.0;
  }
  for (double& f : freq) f /= samples;
  return freq;
}

// Marginal open-edge probability per edge from an exact distribution.
inline std::vector<double> exact_open_marginals(const FiniteGraph& g,
                                                const std::vector<double>& dist) {
  const int m = g.edge_count();
  std::vector<double> marg(m, 0.0);
  for (std::size_t mask = 0; mask < dist.size(); ++mask)
    for (int e = 0; e < m; ++e)
      if ((mask >> e) & 1u) marg[e] += dist[mask];
  return marg;
}

}  // namespace perclab
