#ifndef ISD_GRAPH_HPP
#define ISD_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isd {

/// Simple undirected graph on the dense vertex range [0, n).
/// Adjacency lists are kept sorted; no loops, no parallel edges.
/// Immutable once built; all query methods are const and thread-safe.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    adj_.assign(static_cast<std::size_t>(n), {});
  }

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  int n() const { return static_cast<int>(adj_.size()); }
  std::int64_t m() const { return m_; }

  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

  bool has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& a = degree(u) <= degree(v) ? neighbors(u) : neighbors(v);
    int w = degree(u) <= degree(v) ? v : u;
    return std::binary_search(a.begin(), a.end(), w);
  }

  /// Construction-phase only. Throws on loops, duplicates and range errors.
  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(u));
    if (has_edge(u, v))
      throw std::invalid_argument("Graph: duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    insert_sorted(adj_[static_cast<std::size_t>(u)], v);
    insert_sorted(adj_[static_cast<std::size_t>(v)], u);
    ++m_;
  }

  /// Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(m_));
    for (int u = 0; u < n(); ++u)
      for (int v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  int min_degree() const {
    int d = n() == 0 ? 0 : degree(0);
    for (int v = 1; v < n(); ++v) d = std::min(d, degree(v));
    return d;
  }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n(); ++v) d = std::max(d, degree(v));
    return d;
  }

  struct Induced;

  /// Induced subgraph on the given vertices (deduplicated, order-normalized).
  Induced induced(const std::vector<int>& vertices) const;

  bool operator==(const Graph& other) const = default;

  /// Consistency check used by parser tests: sorted, symmetric, loop-free.
  bool validate() const {
    std::int64_t half_edges = 0;
    for (int u = 0; u < n(); ++u) {
      const auto& a = neighbors(u);
      if (!std::is_sorted(a.begin(), a.end())) return false;
      if (std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
      for (int v : a) {
        if (v < 0 || v >= n() || v == u) return false;
        const auto& b = neighbors(v);
        if (!std::binary_search(b.begin(), b.end(), u)) return false;
      }
      half_edges += static_cast<std::int64_t>(a.size());
    }
    return half_edges == 2 * m_;
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n())
      throw std::out_of_range("Graph: vertex " + std::to_string(v) + " out of range [0," +
                              std::to_string(n()) + ")");
  }

  static void insert_sorted(std::vector<int>& a, int v) {
    a.insert(std::upper_bound(a.begin(), a.end(), v), v);
  }

  std::vector<std::vector<int>> adj_;
  std::int64_t m_ = 0;
};

struct Graph::Induced {
  Graph graph;
  std::vector<int> orig;  // orig[new_id] = old_id, ascending
};

inline Graph::Induced Graph::induced(const std::vector<int>& vertices) const {
  std::vector<int> keep(vertices);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int v : keep) check_vertex(v);
  std::vector<int> to_new(static_cast<std::size_t>(n()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) to_new[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  Graph g(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (int w : neighbors(keep[i])) {
      int j = to_new[static_cast<std::size_t>(w)];
      if (j > static_cast<int>(i)) g.add_edge(static_cast<int>(i), j);
    }
  }
  return Induced{std::move(g), std::move(keep)};
}

/// (min, max) by value; std::minmax over temporaries would dangle.
inline std::pair<int, int> ordered_pair(int a, int b) {
  return a < b ? std::pair<int, int>{a, b} : std::pair<int, int>{b, a};
}

/// No edges between X and Y (vertex sets need not be disjoint; a shared
/// vertex does not count as an edge).
inline bool anticomplete(const Graph& g, const std::vector<int>& xs, const std::vector<int>& ys) {
  std::vector<char> in_y(static_cast<std::size_t>(g.n()), 0);
  for (int y : ys) in_y[static_cast<std::size_t>(y)] = 1;
  for (int x : xs)
    for (int w : g.neighbors(x))
      if (in_y[static_cast<std::size_t>(w)]) return false;
  return true;
}

inline bool is_independent_set(const Graph& g, const std::vector<int>& xs) {
  std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
  for (int x : xs) in[static_cast<std::size_t>(x)] = 1;
  for (int x : xs)
    for (int w : g.neighbors(x))
      if (in[static_cast<std::size_t>(w)]) return false;
  return true;
}

}  // namespace isd

#endif  // ISD_GRAPH_HPP
