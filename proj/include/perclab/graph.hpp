#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace perclab {

// ---------------------------------------------------------------------------
// Lattice specifications
// ---------------------------------------------------------------------------

// Axis-aligned box of the d-dimensional hypercubic lattice, side L vertices
// per axis. Supported dimensions: 2 and 3.
struct Hypercubic {
  int dimension = 2;
  int side = 2;
};

// L x L patch of the triangular lattice, realized as the square grid with an
// added (+1,+1) diagonal in every unit cell. This standard embedding keeps
// vertex coordinates integral.
struct Triangular {
  int side = 2;
};

// Rooted binary tree truncated at the given depth (root at depth 0).
struct BinaryTree {
  int depth = 1;
};

// Cartesian product of a depth-truncated binary tree with a path of
// line_length vertices.
struct TreeCrossLine {
  int depth = 1;
  int line_length = 2;
};

using LatticeSpec = std::variant<Hypercubic, Triangular, BinaryTree, TreeCrossLine>;

inline bool is_box_spec(const LatticeSpec& spec) {
  return std::holds_alternative<Hypercubic>(spec) ||
         std::holds_alternative<Triangular>(spec);
}

inline std::string spec_name(const LatticeSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Hypercubic>)
          os << "hypercubic(d=" << s.dimension << ";L=" << s.side << ")";
        else if constexpr (std::is_same_v<T, Triangular>)
          os << "triangular(L=" << s.side << ")";
        else if constexpr (std::is_same_v<T, BinaryTree>)
          os << "binary-tree(depth=" << s.depth << ")";
        else
          os << "tree-cross-line(depth=" << s.depth << ";M=" << s.line_length << ")";
      },
      spec);
  return os.str();
}

// ---------------------------------------------------------------------------
// Finite graphs
// ---------------------------------------------------------------------------

using VertexSet = std::vector<int>;  // sorted, unique vertex indices

struct FiniteGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;                    // u < v
  std::vector<std::vector<std::pair<int, int>>> adjacency;   // (neighbor, edge)
  std::vector<std::array<int, 3>> coords;                    // unused axes are 0
  int coord_dim = 0;
  VertexSet boundary;               // vertices adjacent to the outside of the
  std::vector<char> is_boundary;    // finite realization, in the ambient graph
  std::optional<LatticeSpec> spec;  // empty for hand-built graphs

  int edge_count() const { return static_cast<int>(edges.size()); }
};

namespace detail {

inline void add_edge(FiniteGraph& g, int u, int v) {
  if (u == v) throw std::invalid_argument("add_edge: self loop");
  if (u > v) std::swap(u, v);
  int e = g.edge_count();
  g.edges.emplace_back(u, v);
  g.adjacency[u].emplace_back(v, e);
  g.adjacency[v].emplace_back(u, e);
}

inline void finalize_boundary(FiniteGraph& g) {
  std::sort(g.boundary.begin(), g.boundary.end());
  g.boundary.erase(std::unique(g.boundary.begin(), g.boundary.end()),
                   g.boundary.end());
  g.is_boundary.assign(g.vertex_count, 0);
  for (int v : g.boundary) g.is_boundary[v] = 1;
}

inline FiniteGraph build_hypercubic(const Hypercubic& s) {
  if (s.dimension < 2) throw std::invalid_argument("hypercubic: dimension < 2");
  if (s.dimension > 3)
    throw std::invalid_argument("hypercubic: only d=2 and d=3 are realized");
  if (s.side < 2) throw std::invalid_argument("hypercubic: side < 2");
  const int d = s.dimension, L = s.side;
  FiniteGraph g;
  g.coord_dim = d;
  g.vertex_count = 1;
  for (int a = 0; a < d; ++a) g.vertex_count *= L;
  g.adjacency.resize(g.vertex_count);
  g.coords.resize(g.vertex_count);
  // row-major: first coordinate most significant
  for (int v = 0; v < g.vertex_count; ++v) {
    int rem = v;
    std::array<int, 3> c{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      c[a] = rem % L;
      rem /= L;
    }
    g.coords[v] = c;
    bool on_face = false;
    for (int a = 0; a < d; ++a)
      if (c[a] == 0 || c[a] == L - 1) on_face = true;
    if (on_face) g.boundary.push_back(v);
  }
  int stride[3] = {0, 0, 0};
  stride[d - 1] = 1;
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * L;
  for (int v = 0; v < g.vertex_count; ++v)
    for (int a = 0; a < d; ++a)
      if (g.coords[v][a] + 1 < L) add_edge(g, v, v + stride[a]);
  finalize_boundary(g);
  return g;
}

inline FiniteGraph build_triangular(const Triangular& s) {
  if (s.side < 2) throw std::invalid_argument("triangular: side < 2");
  const int L = s.side;
  FiniteGraph g;
  g.coord_dim = 2;
  g.vertex_count = L * L;
  g.adjacency.resize(g.vertex_count);
  g.coords.resize(g.vertex_count);
  for (int v = 0; v < g.vertex_count; ++v) {
    int x = v / L, y = v % L;
    g.coords[v] = {x, y, 0};
    // all six triangular neighbors of an interior vertex lie in the patch,
    // so the ambient boundary is exactly the border ring
    if (x == 0 || x == L - 1 || y == 0 || y == L - 1) g.boundary.push_back(v);
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    int x = g.coords[v][0], y = g.coords[v][1];
    if (x + 1 < L) add_edge(g, v, v + L);
    if (y + 1 < L) add_edge(g, v, v + 1);
    if (x + 1 < L && y + 1 < L) add_edge(g, v, v + L + 1);
  }
  finalize_boundary(g);
  return g;
}

// Level-order indexing: root 0, children of t are 2t+1 and 2t+2.
inline FiniteGraph build_binary_tree(const BinaryTree& s) {
  if (s.depth < 1) throw std::invalid_argument("binary-tree: depth < 1");
  const int depth = s.depth;
  FiniteGraph g;
  g.coord_dim = 2;
  g.vertex_count = (1 << (depth + 1)) - 1;
  g.adjacency.resize(g.vertex_count);
  g.coords.resize(g.vertex_count);
  const int first_leaf = (1 << depth) - 1;
  for (int v = 0; v < g.vertex_count; ++v) {
    int level = 0;
    while ((1 << (level + 1)) - 1 <= v) ++level;
    g.coords[v] = {level, v - ((1 << level) - 1), 0};
    // in the infinite rooted tree the absent vertices are the leaves' children
    if (v >= first_leaf) g.boundary.push_back(v);
  }
  for (int v = 0; v < first_leaf; ++v) {
    add_edge(g, v, 2 * v + 1);
    add_edge(g, v, 2 * v + 2);
  }
  finalize_boundary(g);
  return g;
}

inline FiniteGraph build_tree_cross_line(const TreeCrossLine& s) {
  if (s.depth < 1) throw std::invalid_argument("tree-cross-line: depth < 1");
  if (s.line_length < 2)
    throw std::invalid_argument("tree-cross-line: line length < 2");
  const int depth = s.depth, M = s.line_length;
  const int T = (1 << (depth + 1)) - 1;
  const int first_leaf = (1 << depth) - 1;
  FiniteGraph g;
  g.coord_dim = 3;
  g.vertex_count = T * M;
  g.adjacency.resize(g.vertex_count);
  g.coords.resize(g.vertex_count);
  auto idx = [M](int t, int l) { return t * M + l; };
  for (int t = 0; t < T; ++t) {
    int level = 0;
    while ((1 << (level + 1)) - 1 <= t) ++level;
    for (int l = 0; l < M; ++l) {
      int v = idx(t, l);
      g.coords[v] = {level, t - ((1 << level) - 1), l};
      // the infinite product graph continues below the leaves and beyond both
      // ends of the line segment
      if (t >= first_leaf || l == 0 || l == M - 1) g.boundary.push_back(v);
    }
  }
  for (int t = 0; t < T; ++t)
    for (int l = 0; l < M; ++l) {
      if (l + 1 < M) add_edge(g, idx(t, l), idx(t, l + 1));
      if (t < first_leaf) {
        add_edge(g, idx(t, l), idx(2 * t + 1, l));
        add_edge(g, idx(t, l), idx(2 * t + 2, l));
      }
    }
  finalize_boundary(g);
  return g;
}

}  // namespace detail

// Deterministic: a given spec always yields the identical graph, with
// vertices ordered row-major by coordinate tuple and edges ordered by their
// lower endpoint.
inline FiniteGraph build_graph(const LatticeSpec& spec) {
  FiniteGraph g = std::visit(
      [](const auto& s) -> FiniteGraph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Hypercubic>)
          return detail::build_hypercubic(s);
        else if constexpr (std::is_same_v<T, Triangular>)
          return detail::build_triangular(s);
        else if constexpr (std::is_same_v<T, BinaryTree>)
          return detail::build_binary_tree(s);
        else
          return detail::build_tree_cross_line(s);
      },
      spec);
  g.spec = spec;
  return g;
}

// Hand-built graph from an explicit edge list; used for the small exactly
// enumerable instances. The boundary set is whatever the caller says it is.
inline FiniteGraph graph_from_edges(int vertex_count,
                                    const std::vector<std::pair<int, int>>& edges,
                                    const VertexSet& boundary = {}) {
  if (vertex_count < 1) throw std::invalid_argument("graph_from_edges: empty");
  FiniteGraph g;
  g.vertex_count = vertex_count;
  g.adjacency.resize(vertex_count);
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw std::invalid_argument("graph_from_edges: vertex index out of range");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw std::invalid_argument("graph_from_edges: duplicate edge");
    detail::add_edge(g, u, v);
  }
  g.coords.assign(vertex_count, {0, 0, 0});
  for (int v : boundary)
    if (v < 0 || v >= vertex_count)
      throw std::invalid_argument("graph_from_edges: boundary index out of range");
  g.boundary = boundary;
  detail::finalize_boundary(g);
  return g;
}

// ---------------------------------------------------------------------------
// Boundaries and the isoperimetric ratio
// ---------------------------------------------------------------------------

// Two ambients: the boundary of a vertex set is taken either relative to the
// infinite lattice the finite graph was cut from, or relative to the finite
// graph itself.
enum class Ambient { InfiniteLattice, Subgraph };

inline VertexSet vertex_boundary(const FiniteGraph& g, const VertexSet& w,
                                 Ambient ambient) {
  std::vector<char> in_w(g.vertex_count, 0);
  for (int v : w) {
    if (v < 0 || v >= g.vertex_count)
      throw std::invalid_argument("vertex_boundary: index out of range");
    in_w[v] = 1;
  }
  VertexSet out;
  for (int v : w) {
    bool outside_neighbor = false;
    for (auto [nb, e] : g.adjacency[v])
      if (!in_w[nb]) {
        outside_neighbor = true;
        break;
      }
    if (!outside_neighbor && ambient == Ambient::InfiniteLattice)
      outside_neighbor = g.is_boundary[v] != 0;
    if (outside_neighbor) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Exact rational, reduced. Enough for boundary/volume ratios.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Ratio() = default;
  Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Ratio: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Ratio& a, const Ratio& b) {
    return a.num * b.den < b.num * a.den;
  }
};

inline Ratio isoperimetric_ratio(const FiniteGraph& g, const VertexSet& w,
                                 Ambient ambient) {
  if (w.empty()) throw std::invalid_argument("isoperimetric_ratio: empty set");
  VertexSet b = vertex_boundary(g, w, ambient);
  return Ratio(static_cast<std::int64_t>(b.size()),
               static_cast<std::int64_t>(w.size()));
}

inline VertexSet all_vertices(const FiniteGraph& g) {
  VertexSet w(g.vertex_count);
  std::iota(w.begin(), w.end(), 0);
  return w;
}

// ---------------------------------------------------------------------------
// Plain-text dump: header plus one "u v" line per edge
// ---------------------------------------------------------------------------

inline void dump_graph(const FiniteGraph& g, std::ostream& os) {
  os << "# " << (g.spec ? spec_name(*g.spec) : std::string("custom")) << "\n";
  os << "# vertices " << g.vertex_count << " edges " << g.edge_count() << "\n";
  for (auto [u, v] : g.edges) os << u << " " << v << "\n";
}

}  // namespace perclab
