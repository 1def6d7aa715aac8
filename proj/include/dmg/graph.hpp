#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dmg {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

enum class GraphErrc { SelfLoop, DuplicateEdge, VertexOutOfRange, InvalidFamily, MissingLandmarks };

inline const char* to_string(GraphErrc e) {
  switch (e) {
    case GraphErrc::SelfLoop: return "self-loop";
    case GraphErrc::DuplicateEdge: return "duplicate edge";
    case GraphErrc::VertexOutOfRange: return "vertex out of range";
    case GraphErrc::InvalidFamily: return "invalid family parameter";
    case GraphErrc::MissingLandmarks: return "graph has no landmarks";
  }
  return "graph error";
}

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
  GraphErrc code() const noexcept { return code_; }

 private:
  GraphErrc code_;
};

// Dense set of vertex ids backed by 64-bit words.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t universe() const noexcept { return n_; }

  bool contains(Vertex v) const noexcept {
    return v < n_ && ((words_[v >> 6] >> (v & 63)) & 1u) != 0;
  }
  void insert(Vertex v) { words_.at(v >> 6) |= std::uint64_t{1} << (v & 63); }
  void erase(Vertex v) { words_.at(v >> 6) &= ~(std::uint64_t{1} << (v & 63)); }

  std::size_t size() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }

  bool is_subset_of(const VertexSet& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::uint64_t other = i < o.words_.size() ? o.words_[i] : 0;
      if ((words_[i] & ~other) != 0) return false;
    }
    return true;
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        out.push_back(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
    return out;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

using Edge = std::pair<Vertex, Vertex>;

// Immutable simple undirected graph. Adjacency lists are sorted.
class Graph {
 public:
  Graph() = default;

  static Graph build(std::size_t n, std::span<const Edge> edges) {
    Graph g;
    g.adj_.assign(n, {});
    for (const auto& [a, b] : edges) {
      if (a >= n || b >= n) {
        throw GraphError(GraphErrc::VertexOutOfRange,
                         "edge (" + std::to_string(a) + "," + std::to_string(b) + ") with n=" + std::to_string(n));
      }
      if (a == b) throw GraphError(GraphErrc::SelfLoop, "vertex " + std::to_string(a));
      g.adj_[a].push_back(b);
      g.adj_[b].push_back(a);
    }
    for (Vertex v = 0; v < n; ++v) {
      auto& nb = g.adj_[v];
      std::sort(nb.begin(), nb.end());
      if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
        const Vertex dup = *std::adjacent_find(nb.begin(), nb.end());
        throw GraphError(GraphErrc::DuplicateEdge,
                         "(" + std::to_string(std::min(v, dup)) + "," + std::to_string(std::max(v, dup)) + ")");
      }
    }
    g.edge_count_ = edges.size();
    return g;
  }

  static Graph build(std::size_t n, std::initializer_list<Edge> edges) {
    return build(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t vertex_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return adj_.empty(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    check(v);
    return adj_[v];
  }

  // N[v]: v together with its neighbors, ascending.
  std::vector<Vertex> closed_neighborhood(Vertex v) const {
    check(v);
    std::vector<Vertex> out(adj_[v].begin(), adj_[v].end());
    out.insert(std::upper_bound(out.begin(), out.end(), v), v);
    return out;
  }

  bool adjacent(Vertex a, Vertex b) const {
    check(a);
    check(b);
    return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
  }

  // a == b or a ~ b
  bool in_closed_neighborhood(Vertex center, Vertex x) const { return center == x || adjacent(center, x); }

  std::size_t degree(Vertex v) const {
    check(v);
    return adj_[v].size();
  }

  std::size_t max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& nb : adj_) d = std::max(d, nb.size());
    return d;
  }

  // Edges with u < v, sorted lexicographically.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  void check(Vertex v) const {
    if (v >= adj_.size()) {
      throw GraphError(GraphErrc::VertexOutOfRange,
                       "vertex " + std::to_string(v) + " with n=" + std::to_string(adj_.size()));
    }
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t edge_count_ = 0;
};

// BFS distances from `source`, kUnreachable where no path exists.
inline std::vector<std::size_t> bfs_distances(const Graph& g, Vertex source) {
  g.check(source);
  std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
  std::queue<Vertex> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const Vertex x = q.front();
    q.pop();
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  return dist;
}

inline std::optional<std::size_t> distance(const Graph& g, Vertex u, Vertex v) {
  g.check(v);
  const auto d = bfs_distances(g, u)[v];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

// All-pairs distance table; fine for the desk-scale graphs used here.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(const Graph& g) : n_(g.vertex_count()), d_(n_ * n_) {
    for (Vertex s = 0; s < n_; ++s) {
      auto row = bfs_distances(g, s);
      std::copy(row.begin(), row.end(), d_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
  }
  std::size_t operator()(Vertex a, Vertex b) const { return d_[a * n_ + b]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> d_;
};

// Shortest path from u to v (inclusive) whose vertices avoid `forbidden`.
// The endpoints themselves are checked too: a forbidden u or v yields nullopt.
// Ties are broken towards the lowest next-vertex id.
inline std::optional<std::vector<Vertex>> shortest_path(const Graph& g, Vertex u, Vertex v,
                                                        const VertexSet& forbidden = {}) {
  g.check(u);
  g.check(v);
  if (forbidden.contains(u) || forbidden.contains(v)) return std::nullopt;
  // BFS backwards from v so that a forward walk can choose the lowest id at each step.
  std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
  std::queue<Vertex> q;
  dist[v] = 0;
  q.push(v);
  while (!q.empty()) {
    const Vertex x = q.front();
    q.pop();
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] == kUnreachable && !forbidden.contains(y)) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  if (dist[u] == kUnreachable) return std::nullopt;
  std::vector<Vertex> path{u};
  Vertex cur = u;
  while (cur != v) {
    for (Vertex y : g.neighbors(cur)) {
      if (dist[y] != kUnreachable && dist[y] + 1 == dist[cur]) {
        cur = y;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

inline bool is_connected(const Graph& g) {
  if (g.empty()) return true;
  const auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](auto x) { return x == kUnreachable; });
}

inline bool is_triangle_free(const Graph& g) {
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v)
        for (Vertex w : g.neighbors(v))
          if (v < w && g.adjacent(u, w)) return false;
  return true;
}

inline std::vector<std::size_t> eccentricities(const Graph& g) {
  std::vector<std::size_t> ecc(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (auto d : bfs_distances(g, v)) ecc[v] = std::max(ecc[v], d);
  }
  return ecc;
}

// Edge minimising the sum of its endpoints' eccentricities, lowest pair on ties.
inline std::optional<Edge> central_edge(const Graph& g) {
  const auto ecc = eccentricities(g);
  std::optional<Edge> best;
  std::size_t best_score = kUnreachable;
  for (const auto& e : g.edges()) {
    const auto score = ecc[e.first] == kUnreachable || ecc[e.second] == kUnreachable
                           ? kUnreachable - 1
                           : ecc[e.first] + ecc[e.second];
    if (!best || score < best_score) {
      best = e;
      best_score = score;
    }
  }
  return best;
}

struct InducedStar {
  Vertex center = kNoVertex;
  std::vector<Vertex> leaves;
};

namespace detail {

// Exhaustive branch-and-bound search for an independent set of size t among `cand`.
inline bool extend_independent(const Graph& g, std::span<const Vertex> cand, std::size_t from, std::size_t t,
                               std::vector<Vertex>& chosen) {
  if (chosen.size() == t) return true;
  if (cand.size() - from < t - chosen.size()) return false;
  for (std::size_t i = from; i < cand.size(); ++i) {
    const Vertex x = cand[i];
    const bool ok = std::none_of(chosen.begin(), chosen.end(), [&](Vertex c) { return g.adjacent(c, x); });
    if (!ok) continue;
    chosen.push_back(x);
    if (extend_independent(g, cand, i + 1, t, chosen)) return true;
    chosen.pop_back();
    if (cand.size() - (i + 1) < t - chosen.size()) return false;
  }
  return false;
}

inline std::vector<Vertex> greedy_independent(const Graph& g, std::span<const Vertex> cand) {
  // Minimum-degree-within-neighbourhood first.
  std::vector<std::pair<std::size_t, Vertex>> order;
  for (Vertex x : cand) {
    std::size_t inner = 0;
    for (Vertex y : cand) inner += g.adjacent(x, y) ? 1 : 0;
    order.emplace_back(inner, x);
  }
  std::sort(order.begin(), order.end());
  std::vector<Vertex> chosen;
  for (auto [_, x] : order) {
    if (std::none_of(chosen.begin(), chosen.end(), [&](Vertex c) { return g.adjacent(c, x); })) chosen.push_back(x);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace detail

// Finds a vertex with t pairwise non-adjacent neighbours. Exhaustive on graphs with
// at most 32 vertices; larger graphs try a greedy pass first and fall back to the
// exhaustive search per centre.
inline std::optional<InducedStar> find_induced_star(const Graph& g, std::size_t t) {
  if (t == 0) throw std::invalid_argument("find_induced_star: t must be at least 1");
  const bool exact_only = g.vertex_count() <= 32;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto nb = g.neighbors(v);
    if (nb.size() < t) continue;
    if (!exact_only) {
      auto greedy = detail::greedy_independent(g, nb);
      if (greedy.size() >= t) {
        greedy.resize(t);
        return InducedStar{v, std::move(greedy)};
      }
    }
    std::vector<Vertex> chosen;
    if (detail::extend_independent(g, nb, 0, t, chosen)) return InducedStar{v, std::move(chosen)};
  }
  return std::nullopt;
}

}  // namespace dmg
