#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "perclab/rng.hpp"
#include "perclab/stats.hpp"

namespace perclab {

// ---------------------------------------------------------------------------
// Directions and reflectors
// ---------------------------------------------------------------------------

// Signed unit directions are indexed 0:+x, 1:-x, 2:+y, 3:-y, 4:+z, 5:-z;
// the opposite of direction u is u^1.
inline int opposite_direction(int u) { return u ^ 1; }

// Total map on the 2d signed directions. Valid reflectors satisfy
// rho(-rho(u)) = -u: reversing the ball retraces its path.
struct Reflector {
  std::array<std::uint8_t, 6> table{};
  int dimension = 2;
  std::string name;

  int apply(int u) const { return table[u]; }
};

inline bool validate_reflector(const Reflector& r) {
  const int dirs = 2 * r.dimension;
  if (r.dimension < 2 || r.dimension > 3) return false;
  for (int u = 0; u < dirs; ++u) {
    int v = r.table[u];
    if (v < 0 || v >= dirs) return false;
    if (r.table[opposite_direction(v)] != opposite_direction(u)) return false;
  }
  return true;
}

inline Reflector crossing_reflector(int dimension) {
  Reflector r;
  r.dimension = dimension;
  r.name = "crossing";
  for (int u = 0; u < 2 * dimension; ++u) r.table[u] = static_cast<std::uint8_t>(u);
  return r;
}

// Every entry satisfies the retrace identity; note that plain rotations do
// not (a 90-degree turn repeated on the reversed ball fails to retrace), so
// none are shipped.
inline std::vector<Reflector> reflector_catalog(int dimension) {
  auto make = [&](std::string name, std::initializer_list<int> images) {
    Reflector r;
    r.dimension = dimension;
    r.name = std::move(name);
    int u = 0;
    for (int img : images) r.table[u++] = static_cast<std::uint8_t>(img);
    return r;
  };
  std::vector<Reflector> out;
  if (dimension == 2) {
    out.push_back(crossing_reflector(2));
    out.push_back(make("mirror-ne", {2, 3, 0, 1}));   // +x<->+y, -x<->-y
    out.push_back(make("mirror-nw", {3, 2, 1, 0}));   // +x<->-y, -x<->+y
    out.push_back(make("reverser", {1, 0, 3, 2}));    // u -> -u
    out.push_back(make("mirror-x", {1, 0, 2, 3}));    // flips x, passes y
    out.push_back(make("mirror-y", {0, 1, 3, 2}));    // flips y, passes x
  } else if (dimension == 3) {
    out.push_back(crossing_reflector(3));
    out.push_back(make("reverser", {1, 0, 3, 2, 5, 4}));
    out.push_back(make("mirror-xy", {2, 3, 0, 1, 4, 5}));  // swap x,y; pass z
    out.push_back(make("mirror-yz", {0, 1, 4, 5, 2, 3}));  // swap y,z; pass x
    out.push_back(make("mirror-zx", {4, 5, 2, 3, 0, 1}));  // swap z,x; pass y
    out.push_back(make("mirror-x", {1, 0, 2, 3, 4, 5}));
    out.push_back(make("mirror-y", {0, 1, 3, 2, 4, 5}));
    out.push_back(make("mirror-z", {0, 1, 2, 3, 5, 4}));
  } else {
    throw std::invalid_argument("reflector_catalog: dimension must be 2 or 3");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Environments
// ---------------------------------------------------------------------------

enum class SiteKind : std::uint8_t { RwPoint = 0, Crossing = 1, Mirror = 2 };

struct LabyrinthEnv {
  std::vector<int> dims;               // box sides, one per axis
  std::vector<std::uint8_t> tag;       // 0 rw, 1 crossing, 2+j reflector j
  std::vector<Reflector> reflectors;   // non-trivial reflector tables
  double p_rw = 0.0, p_plus = 0.0;
  std::vector<double> pi;              // mass over `reflectors`

  int dimension() const { return static_cast<int>(dims.size()); }
  int vertex_count() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }

  SiteKind kind(int v) const {
    return tag[v] <= 1 ? static_cast<SiteKind>(tag[v]) : SiteKind::Mirror;
  }
  const Reflector& reflector_at(int v) const { return reflectors[tag[v] - 2]; }

  // row-major: first axis most significant
  int index(const std::vector<int>& c) const {
    int v = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) v = v * dims[a] + c[a];
    return v;
  }
  std::vector<int> coords(int v) const {
    std::vector<int> c(dims.size());
    for (int a = dimension() - 1; a >= 0; --a) {
      c[a] = v % dims[a];
      v /= dims[a];
    }
    return c;
  }
};

struct LabyrinthParams {
  double p_rw = 1.0;
  double p_plus = 0.0;
  std::vector<Reflector> reflectors;  // support of pi; may be empty when
  std::vector<double> pi;             // p_rw + p_plus = 1

  void validate() const {
    if (p_rw < 0.0 || p_plus < 0.0 || p_rw + p_plus > 1.0 + 1e-12)
      throw std::invalid_argument("labyrinth: p_rw, p_+ must be non-negative with sum <= 1");
    double mirror_mass = 1.0 - p_rw - p_plus;
    if (mirror_mass > 1e-12) {
      if (reflectors.empty() || pi.size() != reflectors.size())
        throw std::invalid_argument("labyrinth: reflector mass function required");
      double s = 0.0;
      for (double w : pi) {
        if (w < 0.0) throw std::invalid_argument("labyrinth: negative pi");
        s += w;
      }
      if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("labyrinth: pi must sum to 1");
      for (const auto& r : reflectors) {
        if (!validate_reflector(r))
          throw std::invalid_argument("labyrinth: invalid reflector in pi support");
        bool identity = true;
        for (int u = 0; u < 2 * r.dimension; ++u)
          if (r.table[u] != u) identity = false;
        if (identity)
          throw std::invalid_argument("labyrinth: pi support must exclude the crossing");
      }
    }
  }
};

// Uniform mass over the catalog without the crossing.
inline LabyrinthParams default_mirror_params(int dimension, double p_rw,
                                             double p_plus) {
  LabyrinthParams params;
  params.p_rw = p_rw;
  params.p_plus = p_plus;
  auto catalog = reflector_catalog(dimension);
  params.reflectors.assign(catalog.begin() + 1, catalog.end());
  params.pi.assign(params.reflectors.size(),
                   1.0 / static_cast<double>(params.reflectors.size()));
  return params;
}

// Independent per-vertex tags with probabilities (p_rw, p_+, mirror mass
// split by pi).
inline LabyrinthEnv sample_environment(const std::vector<int>& dims,
                                       const LabyrinthParams& params, Seed seed) {
  if (dims.size() < 2 || dims.size() > 3)
    throw std::invalid_argument("labyrinth: dimension must be 2 or 3");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("labyrinth: empty box");
  params.validate();
  for (const auto& r : params.reflectors)
    if (r.dimension != static_cast<int>(dims.size()))
      throw std::invalid_argument("labyrinth: reflector dimension mismatch");

  LabyrinthEnv env;
  env.dims = dims;
  env.reflectors = params.reflectors;
  env.p_rw = params.p_rw;
  env.p_plus = params.p_plus;
  env.pi = params.pi;
  env.tag.resize(env.vertex_count());
  SplitMix64 rng(seed);
  for (auto& t : env.tag) {
    double u = rng.uniform();
    if (u < params.p_rw) {
      t = 0;
    } else if (u < params.p_rw + params.p_plus) {
      t = 1;
    } else {
      double rest = (u - params.p_rw - params.p_plus) /
                    (1.0 - params.p_rw - params.p_plus);
      double acc = 0.0;
      std::uint8_t pick = 2;
      for (std::size_t j = 0; j < params.pi.size(); ++j) {
        acc += params.pi[j];
        if (rest < acc) {
          pick = static_cast<std::uint8_t>(2 + j);
          break;
        }
      }
      t = pick;
    }
  }
  return env;
}

// ---------------------------------------------------------------------------
// Walks
// ---------------------------------------------------------------------------

enum class BoundaryPolicy { Halt, Periodic };

struct WalkState {
  std::vector<int> path;       // vertex indices, path[0] = start
  std::vector<int> headings;   // direction taken at each lattice step
  std::vector<int> rw_visits;  // rw points in visit order, starting at X_0
  // rw-time displacement: net lattice displacement at each rw visit
  std::vector<std::array<int, 3>> rw_displacement;
  bool censored = false;  // halted at the box wall
};

namespace detail {

// Next vertex in direction u, or -1 when the step leaves the box under the
// halting policy.
inline int step_vertex(const LabyrinthEnv& env, int v, int u,
                       BoundaryPolicy policy) {
  int axis = u >> 1;
  int delta = (u & 1) ? -1 : 1;
  // mixed-radix digit of `axis`
  int stride = 1;
  for (int a = env.dimension() - 1; a > axis; --a) stride *= env.dims[a];
  int digit = (v / stride) % env.dims[axis];
  int moved = digit + delta;
  if (moved < 0 || moved >= env.dims[axis]) {
    if (policy == BoundaryPolicy::Halt) return -1;
    moved = (moved + env.dims[axis]) % env.dims[axis];
  }
  return v + (moved - digit) * stride;
}

}  // namespace detail

// Exactly n_lattice_steps moves, or fewer if the walker halts at the wall.
// At rw points the heading is a fair 2d-sided coin; crossings pass the ball
// straight through; reflectors deflect it deterministically.
inline WalkState run_walk(const LabyrinthEnv& env, int start,
                          int n_lattice_steps, Seed seed,
                          BoundaryPolicy policy = BoundaryPolicy::Halt) {
  if (start < 0 || start >= env.vertex_count())
    throw std::invalid_argument("run_walk: start out of range");
  if (env.kind(start) != SiteKind::RwPoint)
    throw std::invalid_argument("run_walk: start is not a rw point");
  SplitMix64 rng(seed);
  const int dirs = 2 * env.dimension();

  WalkState w;
  w.path.push_back(start);
  w.rw_visits.push_back(start);
  w.rw_displacement.push_back({0, 0, 0});
  std::array<int, 3> displacement{0, 0, 0};

  int pos = start;
  int heading = static_cast<int>(rng.below(dirs));
  for (int step = 0; step < n_lattice_steps; ++step) {
    int next = detail::step_vertex(env, pos, heading, policy);
    if (next < 0) {
      w.censored = true;
      break;
    }
    displacement[heading >> 1] += (heading & 1) ? -1 : 1;
    w.headings.push_back(heading);
    w.path.push_back(next);
    pos = next;
    switch (env.kind(pos)) {
      case SiteKind::RwPoint:
        w.rw_visits.push_back(pos);
        w.rw_displacement.push_back(displacement);
        heading = static_cast<int>(rng.below(dirs));
        break;
      case SiteKind::Crossing:
        break;
      case SiteKind::Mirror:
        heading = env.reflector_at(pos).apply(heading);
        break;
    }
  }
  return w;
}

// Does the recorded vertex path conform to every reflector it meets? Only
// meaningful for halting walks, where consecutive positions differ by a unit
// step.
inline bool is_admissible(const LabyrinthEnv& env, const std::vector<int>& path) {
  if (path.size() < 2) return true;
  auto direction = [&](int from, int to) {
    auto cf = env.coords(from), ct = env.coords(to);
    for (int a = 0; a < env.dimension(); ++a) {
      if (ct[a] - cf[a] == 1) return 2 * a;
      if (ct[a] - cf[a] == -1) return 2 * a + 1;
    }
    return -1;
  };
  for (std::size_t j = 1; j + 1 < path.size(); ++j) {
    int incoming = direction(path[j - 1], path[j]);
    int outgoing = direction(path[j], path[j + 1]);
    if (incoming < 0 || outgoing < 0) return false;
    switch (env.kind(path[j])) {
      case SiteKind::RwPoint:
        break;  // free choice
      case SiteKind::Crossing:
        if (outgoing != incoming) return false;
        break;
      case SiteKind::Mirror:
        if (outgoing != env.reflector_at(path[j]).apply(incoming)) return false;
        break;
    }
  }
  return direction(path[path.size() - 2], path.back()) >= 0;
}

// ---------------------------------------------------------------------------
// Equivalence classes of rw points
// ---------------------------------------------------------------------------

struct EquivalenceClass {
  std::vector<int> members;  // rw points reachable by admissible paths
  bool truncated = false;    // exploration stopped at the cap
};

// Deterministic ray-following between rw points over states (vertex,
// heading); a state determines its continuation, so globally visited states
// can be skipped.
inline EquivalenceClass equivalence_class(const LabyrinthEnv& env, int x, int cap,
                                          BoundaryPolicy policy = BoundaryPolicy::Halt) {
  if (cap <= 0) throw std::invalid_argument("equivalence_class: cap <= 0");
  if (x < 0 || x >= env.vertex_count() || env.kind(x) != SiteKind::RwPoint)
    throw std::invalid_argument("equivalence_class: x is not a rw point");
  const int dirs = 2 * env.dimension();
  std::vector<char> state_seen(static_cast<std::size_t>(env.vertex_count()) * dirs, 0);
  std::vector<char> collected(env.vertex_count(), 0);

  EquivalenceClass out;
  std::vector<int> queue{x};
  collected[x] = 1;
  out.members.push_back(x);
  std::size_t head = 0;
  while (head < queue.size()) {
    int v = queue[head++];
    for (int u0 = 0; u0 < dirs; ++u0) {
      int pos = v, heading = u0;
      while (true) {
        std::size_t key = static_cast<std::size_t>(pos) * dirs + heading;
        if (state_seen[key]) break;
        state_seen[key] = 1;
        int next = detail::step_vertex(env, pos, heading, policy);
        if (next < 0) break;
        pos = next;
        if (env.kind(pos) == SiteKind::RwPoint) {
          if (!collected[pos]) {
            collected[pos] = 1;
            out.members.push_back(pos);
            if (static_cast<int>(out.members.size()) > cap) {
              out.truncated = true;
              return out;
            }
            queue.push_back(pos);
          }
          break;
        }
        if (env.kind(pos) == SiteKind::Mirror)
          heading = env.reflector_at(pos).apply(heading);
      }
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

// ---------------------------------------------------------------------------
// Mean squared displacement and localization
// ---------------------------------------------------------------------------

struct MsdPoint {
  int n = 0;
  double msd = 0.0;
  double se = 0.0;
  double censored_fraction = 0.0;
};

struct MsdCurve {
  std::vector<MsdPoint> points;
  double delta_hat = 0.0;     // least-squares slope over the final half
  double fit_residual = 0.0;  // rms residual of that fit
};

// Walks start at the rw point nearest the box center (deterministic
// tie-break by index); replicas draw fresh environments. Time is rw-visit
// time; walkers that hit the wall are censored from later times and counted.
inline MsdCurve msd_curve(const LabyrinthParams& params,
                          const std::vector<int>& dims, int t_max, int replicas,
                          Seed seed, BoundaryPolicy policy = BoundaryPolicy::Halt) {
  if (!(params.p_rw > 0.0))
    throw std::invalid_argument(
        "msd_curve: p_rw = 0 labyrinths have no rw clock to rescale; "
        "the diffusive regime assumes p_rw > 0");
  if (t_max < 2 || replicas < 1)
    throw std::invalid_argument("msd_curve: need t_max >= 2 and replicas >= 1");

  std::vector<double> sum(t_max + 1, 0.0), sum_sq(t_max + 1, 0.0);
  std::vector<int> alive(t_max + 1, 0);
  const int lattice_budget = 64 * t_max + 1024;

  for (int r = 0; r < replicas; ++r) {
    Seed rs = derive_seed(seed, r);
    LabyrinthEnv env = sample_environment(dims, params, derive_seed(rs, 0));
    // nearest rw point to the center
    std::vector<int> center(dims.size());
    for (std::size_t a = 0; a < dims.size(); ++a) center[a] = dims[a] / 2;
    int start = -1;
    long best = -1;
    for (int v = 0; v < env.vertex_count(); ++v) {
      if (env.kind(v) != SiteKind::RwPoint) continue;
      auto c = env.coords(v);
      long d2 = 0;
      for (std::size_t a = 0; a < dims.size(); ++a)
        d2 += static_cast<long>(c[a] - center[a]) * (c[a] - center[a]);
      if (best < 0 || d2 < best) {
        best = d2;
        start = v;
      }
    }
    if (start < 0) continue;  // no rw point in this environment

    WalkState w = run_walk(env, start, lattice_budget, derive_seed(rs, 1), policy);
    int reached = std::min<int>(t_max, static_cast<int>(w.rw_visits.size()) - 1);
    for (int n = 0; n <= reached; ++n) {
      double d2 = 0.0;
      for (int a = 0; a < 3; ++a)
        d2 += static_cast<double>(w.rw_displacement[n][a]) * w.rw_displacement[n][a];
      sum[n] += d2;
      sum_sq[n] += d2 * d2;
      ++alive[n];
    }
  }

  MsdCurve curve;
  for (int n = 0; n <= t_max; ++n) {
    MsdPoint pt;
    pt.n = n;
    pt.censored_fraction =
        1.0 - static_cast<double>(alive[n]) / static_cast<double>(replicas);
    if (alive[n] > 0) {
      pt.msd = sum[n] / alive[n];
      if (alive[n] > 1) {
        double var = (sum_sq[n] - sum[n] * sum[n] / alive[n]) / (alive[n] - 1);
        pt.se = std::sqrt(std::max(0.0, var) / alive[n]);
      }
    }
    curve.points.push_back(pt);
  }

  std::vector<double> xs, ys;
  for (int n = t_max / 2; n <= t_max; ++n)
    if (curve.points[n].censored_fraction < 1.0) {
      xs.push_back(n);
      ys.push_back(curve.points[n].msd);
    }
  if (xs.size() >= 2) {
    LinearFit fit = least_squares(xs, ys);
    curve.delta_hat = fit.slope;
    curve.fit_residual = fit.rms_residual;
  }
  return curve;
}

// Fraction of sampled rw points whose equivalence class closes below the cap.
inline Estimate localization_probe(const LabyrinthParams& params,
                                   const std::vector<int>& dims, int cap,
                                   int replicas, Seed seed,
                                   BoundaryPolicy policy = BoundaryPolicy::Halt) {
  if (replicas < 1) throw std::invalid_argument("replicas < 1");
  std::int64_t localized = 0, sampled = 0;
  for (int r = 0; r < replicas; ++r) {
    Seed rs = derive_seed(seed, r);
    LabyrinthEnv env = sample_environment(dims, params, derive_seed(rs, 0));
    std::vector<int> rw_points;
    for (int v = 0; v < env.vertex_count(); ++v)
      if (env.kind(v) == SiteKind::RwPoint) rw_points.push_back(v);
    if (rw_points.empty()) continue;
    SplitMix64 rng(derive_seed(rs, 1));
    int x = rw_points[rng.below(static_cast<std::uint32_t>(rw_points.size()))];
    EquivalenceClass cls = equivalence_class(env, x, cap, policy);
    ++sampled;
    if (!cls.truncated && static_cast<int>(cls.members.size()) < cap) ++localized;
  }
  if (sampled == 0)
    throw std::runtime_error("localization_probe: no rw points sampled");
  return binomial_estimate(localized, sampled);
}

// ---------------------------------------------------------------------------
// Environment dump: one tag character per vertex plus the reflector tables
// ---------------------------------------------------------------------------

// 'r' = rw point, '+' = crossing, 'A'.. = reflector index.
inline void dump_environment(const LabyrinthEnv& env, std::ostream& os) {
  os << "# labyrinth dims";
  for (int d : env.dims) os << " " << d;
  os << "\n";
  const int row = env.dims.back();
  for (int v = 0; v < env.vertex_count(); ++v) {
    switch (env.kind(v)) {
      case SiteKind::RwPoint: os << 'r'; break;
      case SiteKind::Crossing: os << '+'; break;
      case SiteKind::Mirror:
        os << static_cast<char>('A' + (env.tag[v] - 2));
        break;
    }
    if ((v + 1) % row == 0) os << "\n";
  }
  os << "reflectors:\n";
  for (std::size_t j = 0; j < env.reflectors.size(); ++j) {
    os << static_cast<char>('A' + j) << " " << env.reflectors[j].name << ":";
    for (int u = 0; u < 2 * env.reflectors[j].dimension; ++u)
      os << " " << static_cast<int>(env.reflectors[j].table[u]);
    os << "\n";
  }
}

}  // namespace perclab
