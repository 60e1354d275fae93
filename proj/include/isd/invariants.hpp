#ifndef ISD_INVARIANTS_HPP
#define ISD_INVARIANTS_HPP

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "isd/graph.hpp"

namespace isd {

/// Exact rational over 64-bit parts, for threshold comparisons that must not
/// drift (average degree vs. s-2+eta and friends).
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  mpq_class to_mpq() const {
    return mpq_class(static_cast<long>(num)) / mpq_class(static_cast<long>(den));
  }
};

// ---------------------------------------------------------------------------
// Distances and girth
// ---------------------------------------------------------------------------

/// BFS distances from src; -1 marks unreachable. depth_cap < 0 means no cap.
inline std::vector<int> bfs_distances(const Graph& g, int src, int depth_cap = -1) {
  std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
  dist[static_cast<std::size_t>(src)] = 0;
  std::deque<int> queue{src};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    int du = dist[static_cast<std::size_t>(u)];
    if (depth_cap >= 0 && du >= depth_cap) continue;
    for (int w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = du + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

/// Distance between two vertices; nullopt when unreachable (the paper never
/// needs infinite distances, so disconnected pairs are reported explicitly).
inline std::optional<int> distance(const Graph& g, int u, int v) {
  auto d = bfs_distances(g, u);
  int dv = d[static_cast<std::size_t>(v)];
  if (dv < 0) return std::nullopt;
  return dv;
}

/// Exact girth via truncated BFS from every vertex; nullopt for forests.
inline std::optional<int> girth(const Graph& g) {
  int best = -1;
  std::vector<int> dist(static_cast<std::size_t>(g.n()));
  std::vector<int> parent(static_cast<std::size_t>(g.n()));
  for (int r = 0; r < g.n(); ++r) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    dist[static_cast<std::size_t>(r)] = 0;
    std::deque<int> queue{r};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      int du = dist[static_cast<std::size_t>(u)];
      if (best >= 0 && 2 * du + 1 >= best) break;  // cannot improve from here
      for (int w : g.neighbors(u)) {
        if (w == parent[static_cast<std::size_t>(u)]) continue;
        int dw = dist[static_cast<std::size_t>(w)];
        if (dw < 0) {
          dist[static_cast<std::size_t>(w)] = du + 1;
          parent[static_cast<std::size_t>(w)] = u;
          queue.push_back(w);
        } else {
          int cand = du + dw + 1;
          if (best < 0 || cand < best) best = cand;
        }
      }
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

/// A shortest cycle as a vertex sequence (no repeat of the closing vertex);
/// nullopt for forests. Deterministic.
inline std::optional<std::vector<int>> shortest_cycle(const Graph& g) {
  auto target = girth(g);
  if (!target) return std::nullopt;
  std::vector<int> dist(static_cast<std::size_t>(g.n()));
  std::vector<int> parent(static_cast<std::size_t>(g.n()));
  for (int r = 0; r < g.n(); ++r) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    dist[static_cast<std::size_t>(r)] = 0;
    std::deque<int> queue{r};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      int du = dist[static_cast<std::size_t>(u)];
      for (int w : g.neighbors(u)) {
        if (w == parent[static_cast<std::size_t>(u)]) continue;
        int dw = dist[static_cast<std::size_t>(w)];
        if (dw < 0) {
          dist[static_cast<std::size_t>(w)] = du + 1;
          parent[static_cast<std::size_t>(w)] = u;
          queue.push_back(w);
        } else if (du + dw + 1 == *target) {
          // Chains from u and w up to r; at a girth-realizing root they are
          // disjoint except for r, otherwise a shorter cycle would exist.
          std::vector<int> up_u, up_w;
          for (int x = u; x != -1; x = parent[static_cast<std::size_t>(x)]) up_u.push_back(x);
          for (int x = w; x != -1; x = parent[static_cast<std::size_t>(x)]) up_w.push_back(x);
          std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
          bool disjoint = true;
          for (int x : up_u) seen[static_cast<std::size_t>(x)] = 1;
          for (std::size_t i = 0; i + 1 < up_w.size(); ++i)
            if (seen[static_cast<std::size_t>(up_w[i])]) { disjoint = false; break; }
          if (!disjoint) continue;
          std::vector<int> cycle(up_u.rbegin(), up_u.rend());  // r .. u
          for (std::size_t i = 0; i + 1 < up_w.size(); ++i) cycle.push_back(up_w[i]);  // w .. child-of-r
          return cycle;
        }
      }
    }
  }
  return std::nullopt;  // unreachable: girth was finite
}

// ---------------------------------------------------------------------------
// Degeneracy, coloring, cores
// ---------------------------------------------------------------------------

struct DegeneracyOrder {
  std::vector<int> order;         // peeling order
  int degeneracy = 0;             // max over steps of the peeled vertex's degree
  std::vector<int> right_degree;  // per vertex: neighbors later in the order
};

/// Min-degree peeling with smallest-index tie-break.
inline DegeneracyOrder degeneracy_order(const Graph& g) {
  int n = g.n();
  DegeneracyOrder out;
  out.order.reserve(static_cast<std::size_t>(n));
  out.right_degree.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) return out;

  std::vector<int> deg(static_cast<std::size_t>(n));
  std::set<std::pair<int, int>> live;  // (current degree, vertex)
  for (int v = 0; v < n; ++v) {
    deg[static_cast<std::size_t>(v)] = g.degree(v);
    live.emplace(g.degree(v), v);
  }
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  while (!live.empty()) {
    auto [d, v] = *live.begin();
    live.erase(live.begin());
    removed[static_cast<std::size_t>(v)] = 1;
    out.right_degree[static_cast<std::size_t>(v)] = d;
    out.degeneracy = std::max(out.degeneracy, d);
    out.order.push_back(v);
    for (int w : g.neighbors(v)) {
      if (removed[static_cast<std::size_t>(w)]) continue;
      auto& dw = deg[static_cast<std::size_t>(w)];
      live.erase({dw, w});
      live.emplace(--dw, w);
    }
  }
  return out;
}

/// Greedy coloring in reverse peeling order; at most degeneracy+1 colors.
inline std::vector<int> greedy_color(const Graph& g, const DegeneracyOrder& ord) {
  if (static_cast<int>(ord.order.size()) != g.n())
    throw std::invalid_argument("greedy_color: order does not belong to this graph");
  std::vector<int> color(static_cast<std::size_t>(g.n()), -1);
  for (auto it = ord.order.rbegin(); it != ord.order.rend(); ++it) {
    int v = *it;
    std::vector<char> used(static_cast<std::size_t>(ord.degeneracy) + 2, 0);
    for (int w : g.neighbors(v)) {
      int c = color[static_cast<std::size_t>(w)];
      if (c >= 0 && c < static_cast<int>(used.size())) used[static_cast<std::size_t>(c)] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color[static_cast<std::size_t>(v)] = c;
  }
  return color;
}

/// Repeatedly delete vertices of degree <= d. Returns the surviving vertex
/// set (min degree >= d+1 in the induced subgraph), or nullopt when the
/// peeling empties the graph, which certifies d-degeneracy.
inline std::optional<std::vector<int>> avg_core(const Graph& g, int d) {
  if (d < 0) throw std::invalid_argument("avg_core: d must be >= 0");
  int n = g.n();
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) deg[static_cast<std::size_t>(v)] = g.degree(v);
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  std::deque<int> queue;
  for (int v = 0; v < n; ++v)
    if (deg[static_cast<std::size_t>(v)] <= d) queue.push_back(v);
  std::vector<char> queued(static_cast<std::size_t>(n), 0);
  for (int v : queue) queued[static_cast<std::size_t>(v)] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (!alive[static_cast<std::size_t>(v)]) continue;
    alive[static_cast<std::size_t>(v)] = 0;
    for (int w : g.neighbors(v)) {
      if (!alive[static_cast<std::size_t>(w)]) continue;
      if (--deg[static_cast<std::size_t>(w)] <= d && !queued[static_cast<std::size_t>(w)]) {
        queued[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> survivors;
  for (int v = 0; v < n; ++v)
    if (alive[static_cast<std::size_t>(v)]) survivors.push_back(v);
  if (survivors.empty()) return std::nullopt;
  return survivors;
}

// ---------------------------------------------------------------------------
// Stats
// ---------------------------------------------------------------------------

struct GraphStats {
  int min_degree = 0;
  int max_degree = 0;
  Rational average_degree;      // 2e/n, exact
  std::optional<int> girth;     // nullopt = acyclic
  int component_count = 0;
};

inline int component_count(const Graph& g) {
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  int count = 0;
  for (int v = 0; v < g.n(); ++v) {
    if (seen[static_cast<std::size_t>(v)]) continue;
    ++count;
    std::deque<int> queue{v};
    seen[static_cast<std::size_t>(v)] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int w : g.neighbors(u))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          queue.push_back(w);
        }
    }
  }
  return count;
}

inline GraphStats stats(const Graph& g) {
  GraphStats s;
  s.min_degree = g.min_degree();
  s.max_degree = g.max_degree();
  s.average_degree = g.n() == 0 ? Rational(0, 1) : Rational(2 * g.m(), g.n());
  s.girth = girth(g);
  s.component_count = component_count(g);
  return s;
}

// ---------------------------------------------------------------------------
// Moore bound
// ---------------------------------------------------------------------------

/// 2 * sum_{i=0..m} (delta-1)^i, in arbitrary precision (the paper-scale
/// values overflow any fixed width).
inline mpz_class moore_lower_bound(int delta, long m) {
  if (delta < 2) throw std::invalid_argument("moore_lower_bound: delta must be >= 2");
  if (m < 0) throw std::invalid_argument("moore_lower_bound: m must be >= 0");
  mpz_class base = delta - 1;
  if (base == 1) return mpz_class(2 * (m + 1));
  mpz_class power;
  mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m) + 1);
  // geometric sum: (base^{m+1} - 1) / (base - 1)
  mpz_class sum = (power - 1) / (base - 1);
  return 2 * sum;
}

// ---------------------------------------------------------------------------
// Nearest-root BFS forest
// ---------------------------------------------------------------------------

struct BfsForest {
  std::vector<int> root;    // assigned root, -1 when unassigned
  std::vector<int> parent;  // -1 for roots and unassigned vertices
  std::vector<int> depth;   // -1 when unassigned
};

/// Nearest-root forest; ties broken by (smallest root index, then smallest
/// parent index). Vertices in components without a root stay unassigned.
inline BfsForest bfs_forest(const Graph& g, const std::vector<int>& roots) {
  if (roots.empty()) throw std::invalid_argument("bfs_forest: roots must be nonempty");
  int n = g.n();
  BfsForest f;
  f.root.assign(static_cast<std::size_t>(n), -1);
  f.parent.assign(static_cast<std::size_t>(n), -1);
  f.depth.assign(static_cast<std::size_t>(n), -1);

  std::vector<int> frontier;
  for (int r : roots) {
    if (r < 0 || r >= n) throw std::out_of_range("bfs_forest: root out of range");
    if (f.depth[static_cast<std::size_t>(r)] == 0) continue;  // duplicate root
    f.root[static_cast<std::size_t>(r)] = r;
    f.depth[static_cast<std::size_t>(r)] = 0;
    frontier.push_back(r);
  }
  std::sort(frontier.begin(), frontier.end());

  int level = 0;
  while (!frontier.empty()) {
    // claims (vertex) -> best (root, parent)
    std::vector<std::pair<int, int>> claim(static_cast<std::size_t>(n), {-1, -1});
    std::vector<int> next;
    for (int u : frontier) {
      int ru = f.root[static_cast<std::size_t>(u)];
      for (int w : g.neighbors(u)) {
        if (f.depth[static_cast<std::size_t>(w)] >= 0) continue;
        auto& c = claim[static_cast<std::size_t>(w)];
        std::pair<int, int> cand{ru, u};
        if (c.first < 0 || cand < c) {
          if (c.first < 0) next.push_back(w);
          c = cand;
        }
      }
    }
    ++level;
    std::sort(next.begin(), next.end());
    for (int w : next) {
      f.root[static_cast<std::size_t>(w)] = claim[static_cast<std::size_t>(w)].first;
      f.parent[static_cast<std::size_t>(w)] = claim[static_cast<std::size_t>(w)].second;
      f.depth[static_cast<std::size_t>(w)] = level;
    }
    frontier = std::move(next);
  }
  return f;
}

}  // namespace isd

#endif  // ISD_INVARIANTS_HPP
