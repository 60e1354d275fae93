#ifndef ISD_CONNECTIVITY_HPP
#define ISD_CONNECTIVITY_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isd/graph.hpp"
#include "isd/invariants.hpp"
#include "isd/search.hpp"

namespace isd {

// ---------------------------------------------------------------------------
// Vertex connectivity via unit-capacity max-flow on the vertex-split digraph
// ---------------------------------------------------------------------------

namespace detail {

/// Max number of internally vertex-disjoint s-t paths (s != t, st not an
/// edge), plus a minimum s-t vertex cut realizing it. Dinic on the split
/// digraph: v_in = 2v, v_out = 2v+1.
struct StFlow {
  int value = 0;
  std::vector<int> cut;  // separator vertices
};

inline StFlow st_vertex_flow(const Graph& g, int s, int t) {
  int n = g.n();
  int nodes = 2 * n;
  struct Arc { int to, rev, cap; };
  std::vector<std::vector<Arc>> arcs(static_cast<std::size_t>(nodes));
  auto add_arc = [&](int a, int b, int cap) {
    arcs[static_cast<std::size_t>(a)].push_back({b, static_cast<int>(arcs[static_cast<std::size_t>(b)].size()), cap});
    arcs[static_cast<std::size_t>(b)].push_back({a, static_cast<int>(arcs[static_cast<std::size_t>(a)].size()) - 1, 0});
  };
  for (int v = 0; v < n; ++v) add_arc(2 * v, 2 * v + 1, 1);
  for (int u = 0; u < n; ++u)
    for (int w : g.neighbors(u)) add_arc(2 * u + 1, 2 * w, 1);

  int src = 2 * s + 1, dst = 2 * t;
  std::vector<int> level(static_cast<std::size_t>(nodes));
  std::vector<int> it(static_cast<std::size_t>(nodes));
  auto bfs = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::deque<int> queue{src};
    level[static_cast<std::size_t>(src)] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const Arc& a : arcs[static_cast<std::size_t>(u)])
        if (a.cap > 0 && level[static_cast<std::size_t>(a.to)] < 0) {
          level[static_cast<std::size_t>(a.to)] = level[static_cast<std::size_t>(u)] + 1;
          queue.push_back(a.to);
        }
    }
    return level[static_cast<std::size_t>(dst)] >= 0;
  };
  std::function<int(int, int)> dfs = [&](int u, int pushed) -> int {
    if (u == dst) return pushed;
    for (int& i = it[static_cast<std::size_t>(u)]; i < static_cast<int>(arcs[static_cast<std::size_t>(u)].size()); ++i) {
      Arc& a = arcs[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)];
      if (a.cap <= 0 || level[static_cast<std::size_t>(a.to)] != level[static_cast<std::size_t>(u)] + 1) continue;
      int got = dfs(a.to, std::min(pushed, a.cap));
      if (got > 0) {
        a.cap -= got;
        arcs[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += got;
        return got;
      }
    }
    return 0;
  };

  StFlow out;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    while (int f = dfs(src, 1 << 30)) out.value += f;
  }
  // min cut: saturated in->out arcs reachable on the in side only
  std::vector<char> reach(static_cast<std::size_t>(nodes), 0);
  std::deque<int> queue{src};
  reach[static_cast<std::size_t>(src)] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const Arc& a : arcs[static_cast<std::size_t>(u)])
      if (a.cap > 0 && !reach[static_cast<std::size_t>(a.to)]) {
        reach[static_cast<std::size_t>(a.to)] = 1;
        queue.push_back(a.to);
      }
  }
  for (int v = 0; v < n; ++v)
    if (reach[static_cast<std::size_t>(2 * v)] && !reach[static_cast<std::size_t>(2 * v + 1)])
      out.cut.push_back(v);
  return out;
}

}  // namespace detail

struct ConnectivityResult {
  int value = 0;
  std::vector<int> cut;  // empty for complete graphs
};

/// Exact vertex connectivity with a realizing minimum separator.
/// K_n returns n-1 with an empty cut.
inline ConnectivityResult vertex_connectivity_with_cut(const Graph& g) {
  int n = g.n();
  if (n < 2) throw std::invalid_argument("vertex_connectivity: need at least 2 vertices");
  if (g.m() == static_cast<std::int64_t>(n) * (n - 1) / 2) return {n - 1, {}};

  // pick a minimum-degree vertex; a minimum cut either avoids it (then it
  // separates it from some non-neighbor) or contains it (then it separates
  // two of its neighbors, which are non-adjacent for some pair).
  int v0 = 0;
  for (int v = 1; v < n; ++v)
    if (g.degree(v) < g.degree(v0)) v0 = v;

  ConnectivityResult best{n - 1, {}};
  auto consider = [&](int a, int b) {
    if (a == b || g.has_edge(a, b)) return;
    auto flow = detail::st_vertex_flow(g, a, b);
    if (flow.value < best.value) best = {flow.value, std::move(flow.cut)};
  };
  std::vector<char> is_nb(static_cast<std::size_t>(n), 0);
  for (int w : g.neighbors(v0)) is_nb[static_cast<std::size_t>(w)] = 1;
  for (int w = 0; w < n; ++w)
    if (w != v0 && !is_nb[static_cast<std::size_t>(w)]) consider(v0, w);
  const auto& nbs = g.neighbors(v0);
  for (std::size_t i = 0; i < nbs.size(); ++i)
    for (std::size_t j = i + 1; j < nbs.size(); ++j) consider(nbs[i], nbs[j]);
  return best;
}

inline int vertex_connectivity(const Graph& g) { return vertex_connectivity_with_cut(g).value; }

// ---------------------------------------------------------------------------
// Disjoint-path (linkage) solving
// ---------------------------------------------------------------------------

struct LinkageInstance {
  Graph host;
  std::vector<std::pair<int, int>> pairs;

  void validate() const {
    if (pairs.empty()) throw std::invalid_argument("linkage: need at least one pair");
    std::vector<int> terms;
    for (const auto& [x, y] : pairs) {
      if (x < 0 || x >= host.n() || y < 0 || y >= host.n())
        throw std::out_of_range("linkage: terminal out of range");
      terms.push_back(x);
      terms.push_back(y);
    }
    std::sort(terms.begin(), terms.end());
    if (std::adjacent_find(terms.begin(), terms.end()) != terms.end())
      throw std::invalid_argument("linkage: terminals must be pairwise distinct");
  }
};

struct LinkageResult {
  SearchStatus status = SearchStatus::none_exists;
  std::vector<std::vector<int>> paths;  // paths[i] joins pairs[i], in input order
  std::uint64_t nodes_expanded = 0;
};

/// Complete backtracking solver. Pairs are processed by increasing host
/// distance; path extensions try distance-to-target-ascending neighbors.
/// "none_exists" is a proof of non-linkage when the budget was not exhausted.
inline LinkageResult solve_linkage(const LinkageInstance& inst, std::uint64_t budget = 10'000'000) {
  inst.validate();
  const Graph& g = inst.host;
  int k = static_cast<int>(inst.pairs.size());

  // fixed processing order: by shortest-path distance, then input index
  std::vector<int> order(static_cast<std::size_t>(k));
  std::vector<std::vector<int>> dist_to_target(static_cast<std::size_t>(k));
  std::vector<long long> key(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    dist_to_target[static_cast<std::size_t>(i)] = bfs_distances(g, inst.pairs[static_cast<std::size_t>(i)].second);
    int d = dist_to_target[static_cast<std::size_t>(i)][static_cast<std::size_t>(inst.pairs[static_cast<std::size_t>(i)].first)];
    key[static_cast<std::size_t>(i)] = d < 0 ? (1LL << 40) : d;
    order[static_cast<std::size_t>(i)] = i;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(key[static_cast<std::size_t>(a)], a) < std::pair(key[static_cast<std::size_t>(b)], b);
  });

  std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
  for (const auto& [x, y] : inst.pairs) {
    used[static_cast<std::size_t>(x)] = 1;
    used[static_cast<std::size_t>(y)] = 1;
  }

  Budget nodes{budget};
  std::vector<std::vector<int>> paths(static_cast<std::size_t>(k));
  bool out_of_budget = false;

  std::function<bool(int)> solve = [&](int idx) -> bool {
    if (idx == k) return true;
    int pair_id = order[static_cast<std::size_t>(idx)];
    auto [sx, sy] = inst.pairs[static_cast<std::size_t>(pair_id)];
    const auto& dt = dist_to_target[static_cast<std::size_t>(pair_id)];
    std::vector<int>& path = paths[static_cast<std::size_t>(pair_id)];
    path = {sx};

    std::function<bool(int)> grow = [&](int u) -> bool {
      if (!nodes.tick()) { out_of_budget = true; return false; }
      if (u == sy) return solve(idx + 1);
      std::vector<int> cands;
      for (int w : g.neighbors(u))
        if (w == sy || !used[static_cast<std::size_t>(w)]) cands.push_back(w);
      std::sort(cands.begin(), cands.end(), [&](int a, int b) {
        int da = dt[static_cast<std::size_t>(a)], db = dt[static_cast<std::size_t>(b)];
        if (da < 0) da = 1 << 29;
        if (db < 0) db = 1 << 29;
        return std::pair(da, a) < std::pair(db, b);
      });
      for (int w : cands) {
        bool is_target = (w == sy);
        if (!is_target) used[static_cast<std::size_t>(w)] = 1;
        path.push_back(w);
        if (grow(w)) return true;
        path.pop_back();
        if (!is_target) used[static_cast<std::size_t>(w)] = 0;
        if (out_of_budget) return false;
      }
      return false;
    };
    if (grow(sx)) return true;
    path.clear();
    return false;
  };

  LinkageResult res;
  bool ok = solve(0);
  res.nodes_expanded = nodes.used;
  if (ok) {
    res.status = SearchStatus::found;
    res.paths = std::move(paths);
    // soundness check on every return
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    for (int i = 0; i < k; ++i) {
      const auto& p = res.paths[static_cast<std::size_t>(i)];
      if (p.front() != inst.pairs[static_cast<std::size_t>(i)].first ||
          p.back() != inst.pairs[static_cast<std::size_t>(i)].second)
        throw std::logic_error("linkage: endpoint mismatch");
      for (std::size_t j = 0; j + 1 < p.size(); ++j)
        if (!g.has_edge(p[j], p[j + 1])) throw std::logic_error("linkage: non-edge on path");
      for (int v : p) {
        if (seen[static_cast<std::size_t>(v)]) throw std::logic_error("linkage: paths not disjoint");
        seen[static_cast<std::size_t>(v)] = 1;
      }
    }
  } else {
    res.status = out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::none_exists;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Highly connected induced blocks with small boundary
// ---------------------------------------------------------------------------

struct Block {
  std::vector<int> vertices;
  std::vector<int> boundary;  // members with a neighbor outside, in the input graph
  int connectivity_witness = 0;
};

/// Search for an induced q-connected subgraph with more than 4q^2 vertices
/// and boundary at most boundary_cap: peel to the (4q^2)-core, then split at
/// small vertex cuts, recursing into the larger side. Absence is not a
/// disproof.
inline std::optional<Block> extract_block(const Graph& g, int q, int boundary_cap) {
  if (q < 2) throw std::invalid_argument("extract_block: q must be >= 2");
  long long size_floor = 4LL * q * q;
  auto core = avg_core(g, static_cast<int>(std::min<long long>(size_floor, 1 << 28)) - 1);
  // peel to min degree >= 4q^2
  if (!core) return std::nullopt;
  std::vector<int> current = *core;

  for (;;) {
    if (static_cast<long long>(current.size()) <= size_floor) return std::nullopt;
    auto sub = g.induced(current);
    if (sub.graph.n() < 2) return std::nullopt;
    auto conn = vertex_connectivity_with_cut(sub.graph);
    if (conn.value >= q) {
      Block b;
      b.vertices = current;
      b.connectivity_witness = conn.value;
      std::vector<char> inside(static_cast<std::size_t>(g.n()), 0);
      for (int v : current) inside[static_cast<std::size_t>(v)] = 1;
      for (int v : current)
        for (int w : g.neighbors(v))
          if (!inside[static_cast<std::size_t>(w)]) {
            b.boundary.push_back(v);
            break;
          }
      if (static_cast<int>(b.boundary.size()) > boundary_cap) return std::nullopt;
      return b;
    }
    // split at the small cut: recurse into the largest component plus cut
    std::vector<char> in_cut(static_cast<std::size_t>(sub.graph.n()), 0);
    for (int c : conn.cut) in_cut[static_cast<std::size_t>(c)] = 1;
    std::vector<int> comp(static_cast<std::size_t>(sub.graph.n()), -1);
    int comp_count = 0;
    for (int v = 0; v < sub.graph.n(); ++v) {
      if (in_cut[static_cast<std::size_t>(v)] || comp[static_cast<std::size_t>(v)] >= 0) continue;
      std::deque<int> queue{v};
      comp[static_cast<std::size_t>(v)] = comp_count;
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int w : sub.graph.neighbors(u))
          if (!in_cut[static_cast<std::size_t>(w)] && comp[static_cast<std::size_t>(w)] < 0) {
            comp[static_cast<std::size_t>(w)] = comp_count;
            queue.push_back(w);
          }
      }
      ++comp_count;
    }
    if (comp_count <= 1) return std::nullopt;  // cut did not split: give up
    std::vector<int> tally(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < sub.graph.n(); ++v)
      if (comp[static_cast<std::size_t>(v)] >= 0) ++tally[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
    int big = static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
    std::vector<int> next;
    for (int v = 0; v < sub.graph.n(); ++v)
      if (comp[static_cast<std::size_t>(v)] == big || in_cut[static_cast<std::size_t>(v)])
        next.push_back(sub.orig[static_cast<std::size_t>(v)]);
    // re-peel inside the loop
    auto sub2 = g.induced(next);
    auto core2 = avg_core(sub2.graph, static_cast<int>(std::min<long long>(size_floor, 1 << 28)) - 1);
    if (!core2) return std::nullopt;
    std::vector<int> repeeled;
    for (int v : *core2) repeeled.push_back(sub2.orig[static_cast<std::size_t>(v)]);
    if (repeeled.size() >= current.size()) return std::nullopt;  // no progress
    current = std::move(repeeled);
  }
}

struct BlockDecomposition {
  std::vector<Block> blocks;
  std::vector<std::vector<int>> deleted;  // Z_t sets, interleaved with extractions
  bool complete = true;
  std::string diagnostic;
};

/// Iterated extraction: peel below-T vertices, extract a k-connected block,
/// delete it, repeat. Blocks plus deleted sets partition V(g) when complete.
inline BlockDecomposition block_decomposition(const Graph& g, int k, long long T = -1) {
  if (k < 2) throw std::invalid_argument("block_decomposition: k must be >= 2");
  if (T < 0) T = 4LL * k * k;
  BlockDecomposition out;
  std::vector<int> remaining;
  for (int v = 0; v < g.n(); ++v) remaining.push_back(v);

  while (!remaining.empty()) {
    auto sub = g.induced(remaining);
    // peel vertices of degree < T
    auto core = avg_core(sub.graph, static_cast<int>(std::min<long long>(T, 1 << 28)) - 1);
    std::vector<char> kept(static_cast<std::size_t>(sub.graph.n()), 0);
    if (core)
      for (int v : *core) kept[static_cast<std::size_t>(v)] = 1;
    std::vector<int> peeled, next;
    for (int v = 0; v < sub.graph.n(); ++v)
      (kept[static_cast<std::size_t>(v)] ? next : peeled).push_back(sub.orig[static_cast<std::size_t>(v)]);
    out.deleted.push_back(std::move(peeled));  // one Z_t per round, possibly empty
    if (!core) break;
    remaining = std::move(next);
    if (remaining.empty()) break;

    auto residual = g.induced(remaining);
    auto block = extract_block(residual.graph, k, 2 * k * k);
    if (!block) {
      out.complete = false;
      out.diagnostic = "extract_block failed on residual with " + std::to_string(remaining.size()) +
                       " vertices and min degree >= " + std::to_string(T);
      break;
    }
    Block mapped;
    mapped.connectivity_witness = block->connectivity_witness;
    for (int v : block->vertices) mapped.vertices.push_back(residual.orig[static_cast<std::size_t>(v)]);
    for (int v : block->boundary) mapped.boundary.push_back(residual.orig[static_cast<std::size_t>(v)]);
    std::vector<char> in_block(static_cast<std::size_t>(g.n()), 0);
    for (int v : mapped.vertices) in_block[static_cast<std::size_t>(v)] = 1;
    out.blocks.push_back(std::move(mapped));
    std::vector<int> rest;
    for (int v : remaining)
      if (!in_block[static_cast<std::size_t>(v)]) rest.push_back(v);
    remaining = std::move(rest);
  }
  return out;
}

}  // namespace isd

#endif  // ISD_CONNECTIVITY_HPP
