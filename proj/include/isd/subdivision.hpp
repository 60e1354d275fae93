#ifndef ISD_SUBDIVISION_HPP
#define ISD_SUBDIVISION_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isd/graph.hpp"
#include "isd/invariants.hpp"
#include "isd/search.hpp"

namespace isd {

/// Checkable witness that a host graph contains a subdivision of `pattern`:
/// an injective branch map plus one host path per pattern edge.
struct SubdivisionCertificate {
  Graph pattern;
  std::vector<int> branch;  // branch[p] = host vertex for pattern vertex p
  std::map<std::pair<int, int>, std::vector<int>> paths;  // key (u,v) with u<v;
                                                          // path runs branch[u] .. branch[v]

  const std::vector<int>& path_for(int u, int v) const {
    auto it = paths.find(ordered_pair(u, v));
    if (it == paths.end()) throw std::out_of_range("certificate: no path for pattern edge");
    return it->second;
  }
};

class MalformedCertificate : public std::runtime_error {
 public:
  explicit MalformedCertificate(const std::string& what) : std::runtime_error(what) {}
};

struct Violation {
  std::string kind;
  std::vector<int> witness;  // host vertices involved
};

struct VerificationReport {
  bool is_subdivision = false;
  bool is_induced = false;
  bool is_proper = false;
  std::vector<Violation> violations;
};

/// Structural verification. Throws MalformedCertificate on dangling indices,
/// non-injective branch maps or missing paths -- that is a different outcome
/// from a well-formed certificate that fails a flag.
inline VerificationReport verify(const Graph& host, const SubdivisionCertificate& cert) {
  const Graph& pat = cert.pattern;
  if (static_cast<int>(cert.branch.size()) != pat.n())
    throw MalformedCertificate("branch map is not total over the pattern vertices");
  for (int b : cert.branch)
    if (b < 0 || b >= host.n()) throw MalformedCertificate("branch image out of host range");
  {
    std::vector<int> sorted = cert.branch;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MalformedCertificate("branch map is not injective");
  }
  for (const auto& [u, v] : pat.edges())
    if (!cert.paths.count({u, v})) throw MalformedCertificate("missing path for pattern edge");
  for (const auto& [key, path] : cert.paths) {
    if (!pat.has_edge(key.first, key.second))
      throw MalformedCertificate("path supplied for a non-edge of the pattern");
    for (int v : path)
      if (v < 0 || v >= host.n()) throw MalformedCertificate("path vertex out of host range");
  }

  VerificationReport rep;
  rep.is_subdivision = true;

  // per-path structural checks
  std::vector<int> owner(static_cast<std::size_t>(host.n()), -1);  // path id per internal vertex
  std::vector<int> branch_of(static_cast<std::size_t>(host.n()), -1);
  for (int p = 0; p < pat.n(); ++p) branch_of[static_cast<std::size_t>(cert.branch[p])] = p;

  int path_id = 0;
  for (const auto& [key, path] : cert.paths) {
    auto [u, v] = key;
    if (path.size() < 2 || path.front() != cert.branch[u] || path.back() != cert.branch[v]) {
      rep.is_subdivision = false;
      rep.violations.push_back({"path-endpoints", path});
      ++path_id;
      continue;
    }
    bool edges_ok = true;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (!host.has_edge(path[i], path[i + 1])) {
        rep.is_subdivision = false;
        rep.violations.push_back({"path-non-edge", {path[i], path[i + 1]}});
        edges_ok = false;
      }
    (void)edges_ok;
    std::vector<int> sorted(path);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      rep.is_subdivision = false;
      rep.violations.push_back({"path-repeats-vertex", path});
    }
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      int w = path[i];
      if (branch_of[static_cast<std::size_t>(w)] >= 0) {
        rep.is_subdivision = false;
        rep.violations.push_back({"internal-hits-branch", {w}});
      } else if (owner[static_cast<std::size_t>(w)] >= 0 && owner[static_cast<std::size_t>(w)] != path_id) {
        rep.is_subdivision = false;
        rep.violations.push_back({"internal-shared", {w}});
      }
      owner[static_cast<std::size_t>(w)] = path_id;
    }
    ++path_id;
  }

  // induced-ness: host restricted to W must equal the subdivision graph,
  // i.e. every host edge inside W is a consecutive pair of exactly one path
  std::vector<char> in_w(static_cast<std::size_t>(host.n()), 0);
  for (int b : cert.branch) in_w[static_cast<std::size_t>(b)] = 1;
  for (const auto& [key, path] : cert.paths)
    for (int v : path) in_w[static_cast<std::size_t>(v)] = 1;

  std::map<std::pair<int, int>, int> expected;  // consecutive pairs with multiplicity
  for (const auto& [key, path] : cert.paths)
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      expected[ordered_pair(path[i], path[i + 1])]++;

  bool induced_ok = rep.is_subdivision;
  for (int u = 0; u < host.n(); ++u) {
    if (!in_w[static_cast<std::size_t>(u)]) continue;
    for (int v : host.neighbors(u)) {
      if (v < u || !in_w[static_cast<std::size_t>(v)]) continue;
      auto it = expected.find({u, v});
      if (it == expected.end()) {
        induced_ok = false;
        rep.violations.push_back({"chord", {u, v}});
      }
    }
  }
  for (const auto& [e, count] : expected)
    if (count > 1) {
      induced_ok = false;
      rep.violations.push_back({"edge-reused", {e.first, e.second}});
    }
  rep.is_induced = induced_ok;

  // properness: no two branch images adjacent in the host
  bool proper_ok = rep.is_induced;
  for (int p = 0; p < pat.n() && proper_ok; ++p)
    for (int q = p + 1; q < pat.n(); ++q)
      if (host.has_edge(cert.branch[p], cert.branch[q])) {
        proper_ok = false;
        rep.violations.push_back({"adjacent-branch-vertices", {cert.branch[p], cert.branch[q]}});
        break;
      }
  rep.is_proper = proper_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// 1-subdivision
// ---------------------------------------------------------------------------

/// Replace each edge of h by a length-2 path. Returns the new graph on
/// n+m vertices (edge i of h, in sorted order, becomes vertex n+i) plus the
/// canonical certificate against pattern h.
inline std::pair<Graph, SubdivisionCertificate> one_subdivision(const Graph& h) {
  auto es = h.edges();
  Graph g(h.n() + static_cast<int>(es.size()));
  SubdivisionCertificate cert;
  cert.pattern = h;
  cert.branch.resize(static_cast<std::size_t>(h.n()));
  for (int v = 0; v < h.n(); ++v) cert.branch[static_cast<std::size_t>(v)] = v;
  for (std::size_t i = 0; i < es.size(); ++i) {
    int mid = h.n() + static_cast<int>(i);
    g.add_edge(es[i].first, mid);
    g.add_edge(mid, es[i].second);
    cert.paths[es[i]] = {es[i].first, mid, es[i].second};
  }
  return {std::move(g), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Shortest induced paths
// ---------------------------------------------------------------------------

/// Shortest u-v path within host[allowed]. Shortest paths are chordless in
/// the allowed set; the post-condition is asserted. Deterministic
/// (smallest-parent tie-break). nullopt when disconnected.
inline std::optional<std::vector<int>> shortest_induced_path(const Graph& host,
                                                             const std::vector<int>& allowed,
                                                             int u, int v) {
  std::vector<char> ok(static_cast<std::size_t>(host.n()), 0);
  for (int x : allowed) ok[static_cast<std::size_t>(x)] = 1;
  if (!ok[static_cast<std::size_t>(u)] || !ok[static_cast<std::size_t>(v)])
    throw std::invalid_argument("shortest_induced_path: endpoints must be allowed");
  std::vector<int> parent(static_cast<std::size_t>(host.n()), -2);
  parent[static_cast<std::size_t>(u)] = -1;
  std::vector<int> frontier{u};
  bool reached = (u == v);
  while (!frontier.empty() && !reached) {
    std::vector<int> next;
    for (int x : frontier) {
      for (int w : host.neighbors(x)) {
        if (!ok[static_cast<std::size_t>(w)] || parent[static_cast<std::size_t>(w)] != -2) continue;
        parent[static_cast<std::size_t>(w)] = x;
        next.push_back(w);
        if (w == v) reached = true;
      }
    }
    // smallest-parent determinism: frontier is processed in ascending order
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  if (!reached && parent[static_cast<std::size_t>(v)] == -2) return std::nullopt;
  std::vector<int> path;
  for (int x = v; x != -1; x = parent[static_cast<std::size_t>(x)]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  // chordlessness within the allowed set
  for (std::size_t i = 0; i < path.size(); ++i)
    for (std::size_t j = i + 2; j < path.size(); ++j)
      if (host.has_edge(path[i], path[j]) && !(i == 0 && j == path.size() - 1))
        throw std::logic_error("shortest_induced_path: path has a chord");
  return path;
}

// ---------------------------------------------------------------------------
// Complete finders
// ---------------------------------------------------------------------------

struct FindResult {
  SearchStatus status = SearchStatus::none_exists;
  std::optional<SubdivisionCertificate> certificate;
  std::uint64_t nodes_expanded = 0;
};

namespace detail {

struct SubdivisionSearch {
  const Graph& host;
  const Graph& pattern;
  bool induced;      // enforce anticompleteness pruning / induced result
  bool proper_only;  // additionally forbid adjacent branch images
  Budget budget;

  std::vector<int> branch;                 // pattern vertex -> host vertex, -1 unset
  std::vector<char> used;                  // host vertices committed to W
  std::vector<int> branch_at;              // host vertex -> pattern vertex or -1
  std::vector<std::pair<int, int>> edges;  // pattern edges in fixed order
  std::map<std::pair<int, int>, std::vector<int>> paths;
  std::vector<int> host_by_degree;
  std::map<int, std::vector<int>> dist_cache;  // host vertex -> BFS distances
  bool out_of_budget = false;

  SubdivisionSearch(const Graph& h, const Graph& p, bool ind, bool prop, std::uint64_t b)
      : host(h), pattern(p), induced(ind), proper_only(prop), budget{b} {
    branch.assign(static_cast<std::size_t>(p.n()), -1);
    used.assign(static_cast<std::size_t>(h.n()), 0);
    branch_at.assign(static_cast<std::size_t>(h.n()), -1);
    edges = p.edges();
    for (int v = 0; v < h.n(); ++v) host_by_degree.push_back(v);
    std::sort(host_by_degree.begin(), host_by_degree.end(), [&](int a, int b2) {
      return std::pair(-h.degree(a), a) < std::pair(-h.degree(b2), b2);
    });
  }

  const std::vector<int>& dist_to(int target) {
    auto it = dist_cache.find(target);
    if (it == dist_cache.end()) it = dist_cache.emplace(target, bfs_distances(host, target)).first;
    return it->second;
  }

  bool assign_branches(int idx) {
    if (!budget.tick()) { out_of_budget = true; return false; }
    if (idx == pattern.n()) return solve_paths(0);
    for (int cand : host_by_degree) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      bool ok = true;
      for (int p = 0; p < idx && ok; ++p) {
        bool host_adj = host.has_edge(branch[static_cast<std::size_t>(p)], cand);
        bool pat_adj = pattern.has_edge(p, idx);
        if (host_adj && (proper_only || (induced && !pat_adj))) ok = false;
      }
      if (!ok) continue;
      branch[static_cast<std::size_t>(idx)] = cand;
      used[static_cast<std::size_t>(cand)] = 1;
      branch_at[static_cast<std::size_t>(cand)] = idx;
      if (assign_branches(idx + 1)) return true;
      branch[static_cast<std::size_t>(idx)] = -1;
      used[static_cast<std::size_t>(cand)] = 0;
      branch_at[static_cast<std::size_t>(cand)] = -1;
      if (out_of_budget) return false;
    }
    return false;
  }

  struct Legality {
    bool ok = false;
    bool must_close = false;  // w touches the target: the path must close now
  };

  // legality of adding host vertex w as the next internal vertex of the
  // path towards `target`, coming from prev
  Legality internal_ok(int w, int prev, int target) {
    if (used[static_cast<std::size_t>(w)]) return {false, false};
    if (!induced) return {true, false};
    Legality res{true, false};
    for (int nb : host.neighbors(w)) {
      if (nb == prev || !used[static_cast<std::size_t>(nb)]) continue;
      if (nb == target) {
        res.must_close = true;
        continue;
      }
      return {false, false};  // adjacency to any other committed vertex is a chord
    }
    return res;
  }

  bool solve_paths(int eidx) {
    if (!budget.tick()) { out_of_budget = true; return false; }
    if (eidx == static_cast<int>(edges.size())) return true;
    auto [pu, pv] = edges[static_cast<std::size_t>(eidx)];
    int source = branch[static_cast<std::size_t>(pu)];
    int target = branch[static_cast<std::size_t>(pv)];

    if (host.has_edge(source, target)) {
      // in induced mode a host edge between the ends forces the length-1 path
      paths[{pu, pv}] = {source, target};
      if (solve_paths(eidx + 1)) return true;
      paths.erase({pu, pv});
      if (out_of_budget || induced) return false;
    }
    std::vector<int> stack{source};
    return grow(eidx, pu, pv, source, target, stack);
  }

  bool grow(int eidx, int pu, int pv, int current, int target, std::vector<int>& stack) {
    if (!budget.tick()) { out_of_budget = true; return false; }
    const auto& dt = dist_to(target);
    std::vector<std::pair<int, Legality>> cands;
    for (int w : host.neighbors(current)) {
      if (w == target) continue;  // closing handled separately below
      Legality leg = internal_ok(w, current, target);
      if (leg.ok) cands.emplace_back(w, leg);
    }
    std::sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
      int da = dt[static_cast<std::size_t>(a.first)], db = dt[static_cast<std::size_t>(b.first)];
      if (da < 0) da = 1 << 29;
      if (db < 0) db = 1 << 29;
      return std::pair(da, a.first) < std::pair(db, b.first);
    });

    // try closing the path first (shortest extension)
    if (host.has_edge(current, target) && stack.size() >= 2) {
      std::vector<int> full = stack;
      full.push_back(target);
      paths[{pu, pv}] = full;
      if (solve_paths(eidx + 1)) return true;
      paths.erase({pu, pv});
      if (out_of_budget) return false;
    }
    for (const auto& [w, leg] : cands) {
      used[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
      if (induced && leg.must_close) {
        // w is adjacent to the target: in induced mode the path must end here
        std::vector<int> full = stack;
        full.push_back(target);
        paths[{pu, pv}] = full;
        if (solve_paths(eidx + 1)) return true;
        paths.erase({pu, pv});
      } else {
        if (grow(eidx, pu, pv, w, target, stack)) return true;
      }
      stack.pop_back();
      used[static_cast<std::size_t>(w)] = 0;
      if (out_of_budget) return false;
    }
    return false;
  }
};

}  // namespace detail

/// Complete backtracking search for an induced subdivision of `pattern` in
/// `host`. "none_exists" is a genuine refutation when status is not
/// budget_exhausted. Every returned certificate re-verifies before return.
inline FindResult find_induced_subdivision(const Graph& host, const Graph& pattern,
                                           std::uint64_t budget = 10'000'000,
                                           bool proper_only = false) {
  if (pattern.n() > host.n())
    throw std::invalid_argument("find_induced_subdivision: pattern larger than host");
  detail::SubdivisionSearch search(host, pattern, /*induced=*/true, proper_only, budget);
  FindResult res;
  bool ok = search.assign_branches(0);
  res.nodes_expanded = search.budget.used;
  if (ok) {
    SubdivisionCertificate cert{pattern, search.branch, search.paths};
    auto rep = verify(host, cert);
    if (!rep.is_induced || (proper_only && !rep.is_proper))
      throw std::logic_error("find_induced_subdivision: internal inconsistency");
    res.status = SearchStatus::found;
    res.certificate = std::move(cert);
  } else {
    res.status = search.out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::none_exists;
  }
  return res;
}

/// Plain (not necessarily induced) subdivision search; only vertex
/// disjointness is enforced.
inline FindResult find_subdivision(const Graph& host, const Graph& pattern,
                                   std::uint64_t budget = 10'000'000) {
  if (pattern.n() > host.n())
    throw std::invalid_argument("find_subdivision: pattern larger than host");
  detail::SubdivisionSearch search(host, pattern, /*induced=*/false, /*proper=*/false, budget);
  FindResult res;
  bool ok = search.assign_branches(0);
  res.nodes_expanded = search.budget.used;
  if (ok) {
    SubdivisionCertificate cert{pattern, search.branch, search.paths};
    auto rep = verify(host, cert);
    if (!rep.is_subdivision) throw std::logic_error("find_subdivision: internal inconsistency");
    res.status = SearchStatus::found;
    res.certificate = std::move(cert);
  } else {
    res.status = search.out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::none_exists;
  }
  return res;
}

/// Sub-certificate on a subset of branch vertices of a complete-pattern
/// certificate (used to pass from a K_{d+1}- to a K_{k+1}-subdivision).
inline SubdivisionCertificate restrict_to_branches(const SubdivisionCertificate& cert,
                                                   const std::vector<int>& pattern_vertices) {
  for (int p : pattern_vertices)
    if (p < 0 || p >= cert.pattern.n())
      throw std::invalid_argument("restrict_to_branches: pattern vertex out of range");
  SubdivisionCertificate out;
  auto ind = cert.pattern.induced(pattern_vertices);
  out.pattern = ind.graph;
  for (int old_p : ind.orig) out.branch.push_back(cert.branch[static_cast<std::size_t>(old_p)]);
  for (const auto& [u, v] : out.pattern.edges()) {
    // ind.orig is ascending, so u < v implies orig[u] < orig[v] and the
    // stored path already runs in the right direction
    int ou = ind.orig[static_cast<std::size_t>(u)], ov = ind.orig[static_cast<std::size_t>(v)];
    out.paths[{u, v}] = cert.path_for(ou, ov);
  }
  return out;
}

}  // namespace isd

#endif  // ISD_SUBDIVISION_HPP
