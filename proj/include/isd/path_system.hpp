#ifndef ISD_PATH_SYSTEM_HPP
#define ISD_PATH_SYSTEM_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "isd/graph.hpp"
#include "isd/invariants.hpp"
#include "isd/rng.hpp"

namespace isd {

// ---------------------------------------------------------------------------
// Separated roots
// ---------------------------------------------------------------------------

struct SeparatedRoots {
  std::vector<int> roots;  // host vertex ids, U-seeded prefix first
  int seeded_count = 0;    // roots[0..seeded_count) came from U
};

/// Greedy maximal set of vertices with pairwise distance > 2*ell, seeded by a
/// maximal such subset of U first, then extended over all of V. Greedy order
/// is ascending vertex index throughout.
inline SeparatedRoots separated_roots(const Graph& g, int ell, const std::vector<int>& preferred) {
  if (ell < 0) throw std::invalid_argument("separated_roots: ell must be >= 0");
  SeparatedRoots out;
  // dist_to_roots[v] <= 2*ell means v is blocked
  std::vector<int> best_dist(static_cast<std::size_t>(g.n()), -1);  // -1 = far
  auto add_root = [&](int r) {
    out.roots.push_back(r);
    auto d = bfs_distances(g, r, 2 * ell);
    for (int v = 0; v < g.n(); ++v) {
      int dv = d[static_cast<std::size_t>(v)];
      if (dv >= 0 && dv <= 2 * ell &&
          (best_dist[static_cast<std::size_t>(v)] < 0 || dv < best_dist[static_cast<std::size_t>(v)]))
        best_dist[static_cast<std::size_t>(v)] = dv;
    }
  };
  std::vector<int> pref(preferred);
  std::sort(pref.begin(), pref.end());
  pref.erase(std::unique(pref.begin(), pref.end()), pref.end());
  for (int u : pref) {
    if (u < 0 || u >= g.n()) throw std::out_of_range("separated_roots: preferred vertex out of range");
    if (best_dist[static_cast<std::size_t>(u)] < 0) add_root(u);
  }
  out.seeded_count = static_cast<int>(out.roots.size());
  for (int v = 0; v < g.n(); ++v)
    if (best_dist[static_cast<std::size_t>(v)] < 0) add_root(v);
  return out;
}

// ---------------------------------------------------------------------------
// Path system: nearest-root forest, inter-tree paths, conflict graph F
// ---------------------------------------------------------------------------

class PathSystemError : public std::runtime_error {
 public:
  explicit PathSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// All auxiliary-graph structure derived from a separated root set:
/// the nearest-root forest, the unique inter-tree paths of length <= L, the
/// auxiliary graph H* (on compact root indices 0..|S*|-1, ascending host
/// order) and the conflict lists N_F(e).
struct PathSystem {
  Graph host;                 // copy; the system is self-contained
  std::vector<int> roots;     // compact -> host vertex, ascending
  std::vector<int> root_idx;  // host vertex -> compact root index or -1
  BfsForest forest;
  int ell = 0;
  long L = 0;

  struct AuxEdge {
    int u, v;               // compact root indices, u < v
    std::vector<int> path;  // host path roots[u] .. roots[v], induced, length <= L
  };
  std::vector<AuxEdge> edges;               // H*
  std::vector<std::vector<int>> conflicts;  // per edge: sorted compact roots in N_F(e)
  Graph aux;                                // H* as a graph on compact indices

  int edge_id(int u, int v) const {
    auto key = ordered_pair(u, v);
    auto it = edge_ids.find({key.first, key.second});
    return it == edge_ids.end() ? -1 : it->second;
  }
  std::map<std::pair<int, int>, int> edge_ids;

  /// Path for aux edge (u,v) oriented to start at compact root `from`.
  std::vector<int> oriented_path(int from, int to) const {
    int id = edge_id(from, to);
    if (id < 0) throw std::out_of_range("path_system: no aux edge");
    std::vector<int> p = edges[static_cast<std::size_t>(id)].path;
    if (p.front() != roots[static_cast<std::size_t>(from)]) std::reverse(p.begin(), p.end());
    return p;
  }
};

/// Build the path system. Girth hypotheses are enforced structurally: an
/// intra-tree chord or a second edge between two trees raises
/// PathSystemError naming the trees.
inline PathSystem build_path_system(const Graph& g, const SeparatedRoots& sep, int ell) {
  PathSystem ps;
  ps.host = g;
  ps.roots = sep.roots;
  std::sort(ps.roots.begin(), ps.roots.end());
  ps.ell = ell;
  ps.L = 4L * ell + 1;
  ps.root_idx.assign(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 0; i < ps.roots.size(); ++i)
    ps.root_idx[static_cast<std::size_t>(ps.roots[i])] = static_cast<int>(i);

  // roots pairwise farther than 2*ell apart
  for (int r : ps.roots) {
    auto d = bfs_distances(g, r, 2 * ell);
    for (int s : ps.roots)
      if (s != r && d[static_cast<std::size_t>(s)] >= 0)
        throw PathSystemError("roots " + std::to_string(r) + " and " + std::to_string(s) +
                              " are within distance 2*ell");
  }

  ps.forest = bfs_forest(g, ps.roots);

  // tree edges: parent links; everything else is either intra-tree (forbidden)
  // or an inter-tree edge (at most one per tree pair)
  std::map<std::pair<int, int>, std::pair<int, int>> connecting;  // (tu,tv) -> host edge
  for (int u = 0; u < g.n(); ++u) {
    for (int v : g.neighbors(u)) {
      if (v < u) continue;
      int ru = ps.forest.root[static_cast<std::size_t>(u)];
      int rv = ps.forest.root[static_cast<std::size_t>(v)];
      if (ru < 0 || rv < 0) continue;  // unassigned components never happen with maximal roots
      if (ru == rv) {
        if (ps.forest.parent[static_cast<std::size_t>(u)] != v && ps.forest.parent[static_cast<std::size_t>(v)] != u)
          throw PathSystemError("tree of root " + std::to_string(ru) +
                                " is not induced (chord " + std::to_string(u) + "-" +
                                std::to_string(v) + ")");
        continue;
      }
      auto key = ordered_pair(ru, rv);
      auto [it, inserted] = connecting.insert({{key.first, key.second}, {u, v}});
      if (!inserted)
        throw PathSystemError("two edges between trees of roots " + std::to_string(key.first) +
                              " and " + std::to_string(key.second) +
                              " (girth hypothesis violated)");
    }
  }

  auto climb = [&](int x) {
    std::vector<int> up{x};
    while (ps.forest.parent[static_cast<std::size_t>(up.back())] >= 0)
      up.push_back(ps.forest.parent[static_cast<std::size_t>(up.back())]);
    return up;  // x .. root
  };

  ps.aux = Graph(static_cast<int>(ps.roots.size()));
  for (const auto& [key, host_edge] : connecting) {
    auto [ru, rv] = key;
    auto [x, y] = host_edge;
    if (ps.forest.root[static_cast<std::size_t>(x)] != ru) std::swap(x, y);
    long len = ps.forest.depth[static_cast<std::size_t>(x)] + 1 + ps.forest.depth[static_cast<std::size_t>(y)];
    if (len > ps.L) continue;  // H* keeps only paths of length <= L
    auto up_x = climb(x), up_y = climb(y);
    std::vector<int> path(up_x.rbegin(), up_x.rend());  // ru .. x
    path.insert(path.end(), up_y.begin(), up_y.end());  // y .. rv
    PathSystem::AuxEdge e;
    e.u = ps.root_idx[static_cast<std::size_t>(ru)];
    e.v = ps.root_idx[static_cast<std::size_t>(rv)];
    if (e.u > e.v) {
      std::swap(e.u, e.v);
      std::reverse(path.begin(), path.end());
    }
    e.path = std::move(path);
    ps.edge_ids[{e.u, e.v}] = static_cast<int>(ps.edges.size());
    ps.aux.add_edge(e.u, e.v);
    ps.edges.push_back(std::move(e));
  }

  // conflict lists: e ~ w iff P_e meets T_w or has a neighbor in T_w
  ps.conflicts.resize(ps.edges.size());
  for (std::size_t i = 0; i < ps.edges.size(); ++i) {
    std::vector<char> seen(ps.roots.size(), 0);
    auto touch = [&](int host_v) {
      int r = ps.forest.root[static_cast<std::size_t>(host_v)];
      if (r >= 0) seen[static_cast<std::size_t>(ps.root_idx[static_cast<std::size_t>(r)])] = 1;
    };
    for (int v : ps.edges[i].path) {
      touch(v);
      for (int w : g.neighbors(v)) touch(w);
    }
    for (std::size_t r = 0; r < ps.roots.size(); ++r)
      if (seen[r]) ps.conflicts[i].push_back(static_cast<int>(r));
    // |N_F(e)| <= (L+1)(Delta+1) always; asserted as a sanity bound
    long cap = (ps.L + 1) * (static_cast<long>(g.max_degree()) + 1);
    if (static_cast<long>(ps.conflicts[i].size()) > cap)
      throw std::logic_error("path_system: conflict list exceeds (L+1)(D+1)");
  }

  // every recorded path is induced and within length L
  for (const auto& e : ps.edges) {
    if (static_cast<long>(e.path.size()) - 1 > ps.L)
      throw std::logic_error("path_system: path longer than L");
    for (std::size_t i = 0; i < e.path.size(); ++i)
      for (std::size_t j = i + 2; j < e.path.size(); ++j)
        if (g.has_edge(e.path[i], e.path[j]))
          throw std::logic_error("path_system: recorded path has a chord");
  }
  return ps;
}

// ---------------------------------------------------------------------------
// Sampled auxiliary graph H
// ---------------------------------------------------------------------------

struct SampledAux {
  std::vector<int> sampled;  // compact root indices in S, ascending
  std::vector<char> in_s;    // membership by compact index
  Graph aux;                 // H: edges uv of H* with N_F(uv) & S = {u,v}
};

/// Independent p-sampling of the roots; an H* edge survives iff no third
/// sampled root conflicts with it.
inline SampledAux sample_aux_graph(const PathSystem& ps, const mpq_class& p, std::mt19937_64& rng) {
  if (p <= 0 || p > 1) throw std::invalid_argument("sample_aux_graph: need 0 < p <= 1");
  SampledAux out;
  out.in_s.assign(ps.roots.size(), 0);
  // exact Bernoulli(p) from one 64-bit draw per root
  mpz_class num64 = p.get_num() << 64;
  mpz_class threshold = num64 / p.get_den();
  for (std::size_t i = 0; i < ps.roots.size(); ++i) {
    mpz_class draw(static_cast<unsigned long>(rng()));
    if (draw < threshold || p == 1) {
      out.in_s[i] = 1;
      out.sampled.push_back(static_cast<int>(i));
    }
  }
  out.aux = Graph(static_cast<int>(ps.roots.size()));
  for (std::size_t e = 0; e < ps.edges.size(); ++e) {
    int u = ps.edges[e].u, v = ps.edges[e].v;
    if (!out.in_s[static_cast<std::size_t>(u)] || !out.in_s[static_cast<std::size_t>(v)]) continue;
    bool clean = true;
    for (int w : ps.conflicts[e])
      if (w != u && w != v && out.in_s[static_cast<std::size_t>(w)]) {
        clean = false;
        break;
      }
    if (clean) out.aux.add_edge(u, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Robust branchability witnesses
// ---------------------------------------------------------------------------

struct BranchWitness {
  int y = -1;                       // compact root index
  std::vector<int> z;               // distinct host neighbors of roots[y], one per class
  std::vector<std::vector<int>> M;  // per class: compact aux-neighbor indices, |M_i| >= q
};

struct WitnessOptions {
  long exhaustive_cap = 10'000;  // verify condition (iii) exhaustively below this many tuples
  int sample_count = 64;         // random spot-checks above the cap
};

/// Re-validate the three branchability conditions from scratch on the host.
inline bool validate_witness(const PathSystem& ps, const Graph& aux, const BranchWitness& w,
                             long q_threshold, const WitnessOptions& opts, std::mt19937_64& rng) {
  if (w.z.size() != w.M.size() || w.z.empty()) return false;
  int y_host = ps.roots[static_cast<std::size_t>(w.y)];
  // z_i distinct host neighbors of y
  {
    std::vector<int> zs(w.z);
    std::sort(zs.begin(), zs.end());
    if (std::adjacent_find(zs.begin(), zs.end()) != zs.end()) return false;
    for (int z : w.z)
      if (!ps.host.has_edge(y_host, z)) return false;
  }
  // M_i pairwise disjoint subsets of N_aux(y), each of size >= q, with z_i on P_{y y'}
  {
    std::vector<int> all;
    for (const auto& cls : w.M) {
      if (static_cast<long>(cls.size()) < q_threshold) return false;
      for (int m : cls) {
        if (!aux.has_edge(w.y, m)) return false;
        all.push_back(m);
      }
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
  }
  for (std::size_t i = 0; i < w.M.size(); ++i)
    for (int m : w.M[i]) {
      auto path = ps.oriented_path(w.y, m);
      if (std::find(path.begin(), path.end(), w.z[i]) == path.end()) return false;
    }

  // condition (iii): every one-per-class selection yields pairwise internally
  // disjoint, pairwise anticomplete paths in host - y
  auto check_selection = [&](const std::vector<int>& pick) {
    std::vector<std::vector<int>> paths;
    for (int m : pick) paths.push_back(ps.oriented_path(w.y, m));
    for (std::size_t i = 0; i < paths.size(); ++i)
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        std::vector<int> a(paths[i].begin() + 1, paths[i].end());  // drop y
        std::vector<int> b(paths[j].begin() + 1, paths[j].end());
        std::vector<int> sa(a), sb(b);
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        std::vector<int> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
        if (!inter.empty()) return false;
        if (!anticomplete(ps.host, a, b)) return false;
      }
    return true;
  };

  long tuples = 1;
  bool overflow = false;
  for (const auto& cls : w.M) {
    tuples *= static_cast<long>(cls.size());
    if (tuples > opts.exhaustive_cap) { overflow = true; break; }
  }
  if (!overflow) {
    std::vector<std::size_t> idx(w.M.size(), 0);
    for (;;) {
      std::vector<int> pick;
      for (std::size_t i = 0; i < w.M.size(); ++i) pick.push_back(w.M[i][idx[i]]);
      if (!check_selection(pick)) return false;
      std::size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < w.M[pos].size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
    return true;
  }
  for (int t = 0; t < opts.sample_count; ++t) {
    std::vector<int> pick;
    for (const auto& cls : w.M)
      pick.push_back(cls[static_cast<std::size_t>(uniform_below(rng, cls.size()))]);
    if (!check_selection(pick)) return false;  // any failure disqualifies
  }
  return true;
}

/// For each aux vertex y, partition N_H(y) by the first host-neighbor of y
/// on P_{yy'} and report a witness when `a` classes of size >= q_threshold
/// exist. Classes are chosen by descending size, then ascending first-host-
/// neighbor index; validation failures disqualify the vertex.
inline std::map<int, BranchWitness> branch_witnesses(const PathSystem& ps, const Graph& aux, int a,
                                                     long q_threshold,
                                                     const WitnessOptions& opts = {},
                                                     std::uint64_t seed = 0) {
  if (a < 1 || q_threshold < 1)
    throw std::invalid_argument("branch_witnesses: a and q_threshold must be >= 1");
  auto rng = make_rng(seed, 0xb7a9c4ULL);
  std::map<int, BranchWitness> out;
  for (int y = 0; y < aux.n(); ++y) {
    if (aux.degree(y) < a) continue;
    std::map<int, std::vector<int>> classes;  // first host-neighbor z -> aux neighbors
    for (int m : aux.neighbors(y)) {
      auto path = ps.oriented_path(y, m);
      classes[path[1]].push_back(m);
    }
    std::vector<std::pair<int, std::vector<int>>> ranked(classes.begin(), classes.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y2) {
      return std::pair(-(long)x.second.size(), x.first) < std::pair(-(long)y2.second.size(), y2.first);
    });
    BranchWitness w;
    w.y = y;
    for (const auto& [z, cls] : ranked) {
      if (static_cast<long>(cls.size()) < q_threshold) break;
      w.z.push_back(z);
      w.M.push_back(cls);
      if (static_cast<int>(w.z.size()) == a) break;
    }
    if (static_cast<int>(w.z.size()) < a) continue;
    if (validate_witness(ps, aux, w, q_threshold, opts, rng)) out.emplace(y, std::move(w));
  }
  return out;
}

}  // namespace isd

#endif  // ISD_PATH_SYSTEM_HPP
