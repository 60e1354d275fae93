#ifndef ISD_GENERATORS_HPP
#define ISD_GENERATORS_HPP

#include <random>
#include <vector>

#include "isd/graph.hpp"
#include "isd/rng.hpp"

namespace isd {

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

inline Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

inline Graph complete_bipartite(int a, int b) {
  Graph g(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
  return g;
}

inline Graph petersen_graph() {
  Graph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);      // outer pentagon
    g.add_edge(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    g.add_edge(i, 5 + i);            // spokes
  }
  return g;
}

/// Heawood graph from its LCF notation [5,-5]^7: Hamiltonian 14-cycle plus
/// alternating +-5 chords. Independent of the projective-plane construction.
inline Graph heawood_graph() {
  Graph g(14);
  for (int i = 0; i < 14; ++i) g.add_edge(i, (i + 1) % 14);
  for (int i = 0; i < 14; i += 2) g.add_edge(i, (i + 5) % 14);
  return g;
}

/// G(n, m): m distinct edges drawn uniformly without replacement.
inline Graph random_graph_nm(int n, int m, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> all;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
  int total = static_cast<int>(all.size());
  if (m > total) m = total;
  // partial Fisher-Yates
  for (int i = 0; i < m; ++i) {
    int j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(total - i)));
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  all.resize(static_cast<std::size_t>(m));
  return Graph::from_edges(n, all);
}

/// G(n, p) with exact rational probability num/den.
inline Graph random_graph_np(int n, std::uint64_t num, std::uint64_t den, std::mt19937_64& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (bernoulli_exact(rng, num, den)) g.add_edge(u, v);
  return g;
}

/// Connected G(n, m) variant: random spanning tree first, then extra edges.
inline Graph random_connected_graph(int n, int m, std::mt19937_64& rng) {
  if (m < n - 1) m = n - 1;
  Graph g(n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i)));
    g.add_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  int extra = m - (n - 1);
  int attempts = 0;
  while (extra > 0 && attempts < 50 * m + 100) {
    ++attempts;
    int u = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    if (u == v || g.has_edge(u, v)) continue;
    g.add_edge(u, v);
    --extra;
  }
  return g;
}

}  // namespace isd

#endif  // ISD_GENERATORS_HPP
