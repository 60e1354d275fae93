#ifndef ISD_REGULAR_GRAPH_HPP
#define ISD_REGULAR_GRAPH_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "isd/generators.hpp"
#include "isd/graph.hpp"
#include "isd/invariants.hpp"
#include "isd/rng.hpp"

namespace isd {

namespace detail {

/// One pairing-model draw: a random perfect matching on d copies of each
/// vertex, retried until the collapsed multigraph is simple.
inline std::optional<Graph> random_regular_once(int d, int n, std::mt19937_64& rng) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(d) * n);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  for (std::size_t i = stubs.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(stubs[i - 1], stubs[j]);
  }
  Graph g(n);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int u = stubs[i], v = stubs[i + 1];
    if (u == v || g.has_edge(u, v)) return std::nullopt;  // loop or multi-edge
    g.add_edge(u, v);
  }
  return g;
}

}  // namespace detail

/// Random d-regular simple graph (pairing model, retried until simple).
inline Graph random_regular_graph(int d, int n, std::mt19937_64& rng, int max_tries = 20000) {
  if (d < 1 || n <= d) throw std::invalid_argument("random_regular_graph: need n > d >= 1");
  if ((static_cast<long long>(d) * n) % 2 != 0)
    throw std::invalid_argument("random_regular_graph: d*n must be even");
  for (int t = 0; t < max_tries; ++t)
    if (auto g = detail::random_regular_once(d, n, rng)) return *g;
  throw std::runtime_error("random_regular_graph: no simple pairing found (d too large?)");
}

/// Random d-regular graph with girth >= g_target, by pairing-model draws
/// followed by girth-raising edge swaps: pick an edge on a shortest cycle
/// and a random second edge, swap endpoints when that does not shorten the
/// girth. Requests below the Moore bound are rejected up-front; otherwise an
/// absent result after the swap budget is inconclusive by contract.
inline std::optional<Graph> high_girth_regular(int d, int n, int g_target, std::uint64_t seed,
                                               std::uint64_t swap_budget = 200'000) {
  if (d < 2 || n <= d) throw std::invalid_argument("high_girth_regular: need n > d >= 2");
  if ((static_cast<long long>(d) * n) % 2 != 0)
    throw std::invalid_argument("high_girth_regular: d*n must be even");
  long m_bound = (g_target - 2) / 2;  // girth >= 2m+2
  if (m_bound >= 1 && mpz_class(n) < moore_lower_bound(d, m_bound)) return std::nullopt;

  auto norm = [](int u, int v) { return std::pair<int, int>(std::min(u, v), std::max(u, v)); };
  auto rng = make_rng(seed, 0x7e617'1a50ULL);
  std::uint64_t spent = 0;
  for (int restart = 0; restart < 64 && spent < swap_budget; ++restart) {
    Graph g = random_regular_graph(d, n, rng);
    auto girth_now = girth(g);
    while (spent < swap_budget) {
      if (!girth_now || *girth_now >= g_target) {
        if (d == 2 && component_count(g) > 1) break;  // 2-regular must be a single cycle
        return g;
      }
      auto cyc = shortest_cycle(g);
      ++spent;
      // one endpoint pair from the cycle, one from a random edge
      std::size_t ci = uniform_below(rng, cyc->size());
      int a = (*cyc)[ci], b = (*cyc)[(ci + 1) % cyc->size()];
      auto edges = g.edges();
      auto [x, y] = edges[uniform_below(rng, edges.size())];
      if (uniform_below(rng, 2)) std::swap(x, y);
      if (x == a || x == b || y == a || y == b) continue;
      if (g.has_edge(a, x) || g.has_edge(b, y)) continue;
      // rewire a-b, x-y -> a-x, b-y
      std::vector<std::pair<int, int>> next_edges;
      for (const auto& e : edges)
        if (e != norm(a, b) && e != norm(x, y)) next_edges.push_back(e);
      next_edges.push_back(norm(a, x));
      next_edges.push_back(norm(b, y));
      Graph candidate = Graph::from_edges(n, next_edges);
      auto girth_cand = girth(candidate);
      int now = girth_now ? *girth_now : 1 << 29;
      int cand = girth_cand ? *girth_cand : 1 << 29;
      if (cand >= now) {
        g = std::move(candidate);
        girth_now = girth_cand;
      }
    }
  }
  return std::nullopt;
}

}  // namespace isd

#endif  // ISD_REGULAR_GRAPH_HPP
