#ifndef ISD_PIPELINE_HPP
#define ISD_PIPELINE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "isd/connectivity.hpp"
#include "isd/generators.hpp"
#include "isd/graph.hpp"
#include "isd/invariants.hpp"
#include "isd/mader_params.hpp"
#include "isd/path_system.hpp"
#include "isd/rng.hpp"
#include "isd/subdivision.hpp"
#include "isd/trace.hpp"

namespace isd {

/// Raised when a structural consequence of the girth hypotheses fails
/// (duplicate auxiliary edges, adjacent pair targets, ...). With the stated
/// girth preconditions these can never fire; with relaxed floors they can.
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

struct PipelineResult {
  std::optional<SubdivisionCertificate> certificate;
  VerificationReport report;  // verification of `certificate` on the input graph
  PipelineTrace trace;
  std::string failure;  // empty iff certificate is present
};

// ---------------------------------------------------------------------------
// Lifting auxiliary subdivisions into the host
// ---------------------------------------------------------------------------

/// Expand an auxiliary path into a host path: consecutive aux vertices are
/// joined through `expander`, which returns the strictly-internal host
/// vertices between two aux endpoints.
template <typename VertexMap, typename Expander>
std::vector<int> lift_path(const std::vector<int>& aux_path, VertexMap&& to_host,
                           Expander&& expander) {
  std::vector<int> out;
  for (std::size_t i = 0; i < aux_path.size(); ++i) {
    out.push_back(to_host(aux_path[i]));
    if (i + 1 < aux_path.size())
      for (int w : expander(aux_path[i], aux_path[i + 1])) out.push_back(w);
  }
  return out;
}

/// Expand an auxiliary cycle (vertex list without repeated endpoint) the same
/// way; used by the girth-transfer property tests.
template <typename VertexMap, typename Expander>
std::vector<int> lift_cycle(const std::vector<int>& aux_cycle, VertexMap&& to_host,
                            Expander&& expander) {
  std::vector<int> out;
  for (std::size_t i = 0; i < aux_cycle.size(); ++i) {
    out.push_back(to_host(aux_cycle[i]));
    for (int w : expander(aux_cycle[i], aux_cycle[(i + 1) % aux_cycle.size()])) out.push_back(w);
  }
  return out;
}

/// Lift a whole certificate through an expander.
template <typename VertexMap, typename Expander>
SubdivisionCertificate lift_certificate(const SubdivisionCertificate& aux_cert,
                                        VertexMap&& to_host, Expander&& expander) {
  SubdivisionCertificate out;
  out.pattern = aux_cert.pattern;
  for (int b : aux_cert.branch) out.branch.push_back(to_host(b));
  for (const auto& [key, path] : aux_cert.paths)
    out.paths[key] = lift_path(path, to_host, expander);
  return out;
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace detail {

inline void record_set(PipelineTrace::Stage& stage, const std::string& name,
                       const std::vector<int>& s) {
  stage.data[name + "_size"] = s.size();
}

/// Chosen vertices with no chosen right-neighbor under a degeneracy order of
/// g[B]; always an independent set.
inline std::vector<int> right_neighbor_filter(const Graph& g, const DegeneracyOrder& b_order,
                                              const Graph::Induced& b_sub,
                                              const std::vector<char>& chosen_in_b) {
  // position in the peeling order, per b_sub-local vertex id
  std::vector<int> pos(static_cast<std::size_t>(b_sub.graph.n()));
  for (int i = 0; i < b_sub.graph.n(); ++i)
    pos[static_cast<std::size_t>(b_order.order[static_cast<std::size_t>(i)])] = i;
  std::vector<int> R;
  for (int v = 0; v < b_sub.graph.n(); ++v) {
    if (!chosen_in_b[static_cast<std::size_t>(v)]) continue;
    bool clean = true;
    for (int w : b_sub.graph.neighbors(v))
      if (chosen_in_b[static_cast<std::size_t>(w)] && pos[static_cast<std::size_t>(w)] > pos[static_cast<std::size_t>(v)]) {
        clean = false;
        break;
      }
    if (clean) R.push_back(b_sub.orig[static_cast<std::size_t>(v)]);
  }
  if (!is_independent_set(g, R))
    throw std::logic_error("right-neighbor filter produced a dependent set");
  return R;
}

inline std::optional<int> girth_value(const Graph& g) { return girth(g); }

inline bool girth_at_least(const Graph& g, long floor_value) {
  auto gg = girth(g);
  return !gg || *gg >= floor_value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Unbalanced bipartite step
// ---------------------------------------------------------------------------

struct UnbalancedOptions {
  std::uint64_t seed = 0;
  int retries = 20;
  long girth_floor = 54;  // the lemma's hypothesis; relaxable for experiments
  std::uint64_t finder_budget = 50'000'000;
};

/// Find an induced K_{d+1}-subdivision in a d-degenerate host with an
/// unbalanced bipartite (A, B) structure: sample B, keep an independent R,
/// collect good A-vertices, build the auxiliary multigraph-free H on R, peel,
/// search a plain K_{d+1}-subdivision and lift it through the length-2
/// connectors. Soundness is unconditional: the returned certificate verified
/// induced and proper. Absence after the retry budget is not a refutation.
inline PipelineResult unbalanced_step(const Graph& g, const std::vector<int>& A,
                                      const std::vector<int>& B, int d,
                                      const UnbalancedOptions& opts = {}) {
  PipelineResult res;
  auto& pre = res.trace.begin("preconditions");
  if (d < 2) throw std::invalid_argument("unbalanced_step: d must be >= 2");
  std::vector<char> in_b(static_cast<std::size_t>(g.n()), 0);
  for (int b : B) in_b[static_cast<std::size_t>(b)] = 1;
  for (int a : A)
    if (in_b[static_cast<std::size_t>(a)])
      throw std::invalid_argument("unbalanced_step: A and B must be disjoint");

  auto ord = degeneracy_order(g);
  if (ord.degeneracy > d)
    throw std::invalid_argument("unbalanced_step: host is not " + std::to_string(d) + "-degenerate");
  if (!detail::girth_at_least(g, opts.girth_floor))
    throw std::invalid_argument("unbalanced_step: girth below the configured floor");
  for (int a : A) {
    int db = 0;
    for (int w : g.neighbors(a)) db += in_b[static_cast<std::size_t>(w)];
    if (db < 2)
      throw std::invalid_argument("unbalanced_step: vertex " + std::to_string(a) +
                                  " has fewer than 2 neighbors in B");
  }
  pre.data["degeneracy"] = ord.degeneracy;
  pre.data["n"] = g.n();
  detail::record_set(pre, "A", A);
  detail::record_set(pre, "B", B);
  pre.data["ratio_hypothesis"] =
      static_cast<long long>(A.size()) > 60LL * d * d * static_cast<long long>(B.size());
  res.trace.end();

  // A0 and the fixed pairs pi(a)
  auto& setup = res.trace.begin("fix_pairs");
  std::vector<int> A0;
  std::map<int, std::pair<int, int>> pi;  // a -> (u_a, v_a), two smallest B-neighbors
  for (int a : A) {
    std::vector<int> nbs;
    for (int w : g.neighbors(a))
      if (in_b[static_cast<std::size_t>(w)]) nbs.push_back(w);
    if (static_cast<long>(nbs.size()) <= 4L * d) {
      A0.push_back(a);
      pi[a] = {nbs[0], nbs[1]};
      if (g.has_edge(nbs[0], nbs[1]))
        throw StructuralError("pair targets adjacent (girth hypothesis violated) at vertex " +
                              std::to_string(a));
    }
  }
  detail::record_set(setup, "A0", A0);
  res.trace.end();

  auto b_sub = g.induced(B);
  auto b_order = degeneracy_order(b_sub.graph);

  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    auto& stage = res.trace.begin("sample_" + std::to_string(attempt));
    auto rng = make_rng(opts.seed, static_cast<std::uint64_t>(attempt));
    std::vector<char> chosen(static_cast<std::size_t>(b_sub.graph.n()), 0);
    for (int v = 0; v < b_sub.graph.n(); ++v)
      chosen[static_cast<std::size_t>(v)] = bernoulli_exact(rng, 1, static_cast<std::uint64_t>(6) * d);
    std::vector<int> R = detail::right_neighbor_filter(g, b_order, b_sub, chosen);
    std::vector<char> in_r(static_cast<std::size_t>(g.n()), 0);
    for (int r : R) in_r[static_cast<std::size_t>(r)] = 1;

    // good vertices: N_R(a) is exactly the fixed pair
    std::vector<int> good;
    for (int a : A0) {
      std::vector<int> hits;
      for (int w : g.neighbors(a))
        if (in_r[static_cast<std::size_t>(w)]) hits.push_back(w);
      auto [ua, va] = pi[a];
      if (hits.size() == 2 && ((hits[0] == ua && hits[1] == va) || (hits[0] == va && hits[1] == ua)))
        good.push_back(a);
    }

    // conflict graph F on good vertices; keep an independent set I
    std::vector<char> is_good(static_cast<std::size_t>(g.n()), 0);
    for (int a : good) is_good[static_cast<std::size_t>(a)] = 1;
    long long Y = 0;
    std::vector<char> alive(static_cast<std::size_t>(g.n()), 0);
    for (int a : good) alive[static_cast<std::size_t>(a)] = 1;
    for (int a : good)
      for (int w : g.neighbors(a))
        if (w > a && is_good[static_cast<std::size_t>(w)]) {
          ++Y;
          if (alive[static_cast<std::size_t>(a)] && alive[static_cast<std::size_t>(w)])
            alive[static_cast<std::size_t>(w)] = 0;  // delete the later endpoint
        }
    std::vector<int> I;
    for (int a : good)
      if (alive[static_cast<std::size_t>(a)]) I.push_back(a);

    long long X = static_cast<long long>(good.size());
    stage.data["X_good"] = X;
    stage.data["Y_conflicts"] = Y;
    detail::record_set(stage, "R", R);
    detail::record_set(stage, "I", I);
    bool gate = X - Y > static_cast<long long>(d) * static_cast<long long>(R.size());
    stage.data["gate_X_minus_Y_gt_dR"] = gate;
    res.trace.end();
    if (!gate) continue;

    // auxiliary H on R: edge u_a v_a per a in I; duplicates violate girth
    Graph H(g.n());
    std::map<std::pair<int, int>, int> edge_owner;  // (u,v) -> a
    for (int a : I) {
      auto [ua, va] = pi[a];
      auto key = ordered_pair(ua, va);
      if (edge_owner.count({key.first, key.second}))
        throw StructuralError("duplicate auxiliary edge " + std::to_string(key.first) + "-" +
                              std::to_string(key.second) + " (girth hypothesis violated)");
      edge_owner[{key.first, key.second}] = a;
      H.add_edge(ua, va);
    }

    auto& peel = res.trace.begin("peel_" + std::to_string(attempt));
    auto core = avg_core(H, d - 1);  // min degree >= d survives
    if (!core) {
      peel.data["core_empty"] = true;
      res.trace.end();
      continue;
    }
    auto h_sub = H.induced(*core);
    peel.data["H_prime_n"] = h_sub.graph.n();
    peel.data["H_prime_m"] = h_sub.graph.m();
    res.trace.end();

    auto& search = res.trace.begin("subdivision_search_" + std::to_string(attempt));
    auto found = find_subdivision(h_sub.graph, complete_graph(d + 1), opts.finder_budget);
    search.data["status"] = found.status == SearchStatus::found
                                ? "found"
                                : (found.status == SearchStatus::none_exists ? "none" : "budget");
    search.data["nodes"] = found.nodes_expanded;
    res.trace.end();
    if (found.status != SearchStatus::found) continue;

    // lift: aux vertices are R-members (host ids via h_sub.orig); each aux
    // edge expands through its good A-vertex
    auto to_host = [&](int aux_v) { return h_sub.orig[static_cast<std::size_t>(aux_v)]; };
    auto expander = [&](int aux_u, int aux_v) {
      auto key = ordered_pair(to_host(aux_u), to_host(aux_v));
      return std::vector<int>{edge_owner.at({key.first, key.second})};
    };
    SubdivisionCertificate cert = lift_certificate(*found.certificate, to_host, expander);
    auto rep = verify(g, cert);
    if (!rep.is_induced || !rep.is_proper)
      throw std::logic_error("unbalanced_step: lifted certificate failed verification");
    res.certificate = std::move(cert);
    res.report = rep;
    auto& done = res.trace.begin("verified");
    done.data["attempt"] = attempt;
    done.data["is_induced"] = rep.is_induced;
    done.data["is_proper"] = rep.is_proper;
    res.trace.end();
    return res;
  }
  res.failure = "retries exhausted without passing the X - Y > d|R| gate and finding a subdivision";
  return res;
}

// ---------------------------------------------------------------------------
// Cleaning step
// ---------------------------------------------------------------------------

struct CleaningOptions {
  std::uint64_t seed = 0;
  int retries = 20;
  long girth_floor = 54;
  mpq_class min_x_fraction{81, 100};
  mpq_class size_coeff{1L, 1'000'000'000'000UL};  // conclusion (i) coefficient
};

struct CleaningResult {
  std::optional<std::pair<std::vector<int>, std::vector<int>>> sets;  // (X', Y)
  PipelineTrace trace;
  std::string failure;
};

/// The degree-cleaning step: pick the bounded-degree part of X, halve it at
/// random, gather the vertices with 2..kappa neighbors in the half, and
/// return the largest color class among them. Conclusions (ii)-(iv) are
/// rechecked structurally on every return; conclusion (i) gates the retry.
inline CleaningResult cleaning_step(const Graph& g, const std::vector<int>& X,
                                    const std::vector<int>& B0, int d,
                                    const CleaningOptions& opts = {}) {
  CleaningResult res;
  auto& pre = res.trace.begin("preconditions");
  if (d < 4) throw std::invalid_argument("cleaning_step: d must be >= 4");
  auto ord = degeneracy_order(g);
  if (ord.degeneracy > d)
    throw std::invalid_argument("cleaning_step: host is not " + std::to_string(d) + "-degenerate");
  if (!detail::girth_at_least(g, opts.girth_floor))
    throw std::invalid_argument("cleaning_step: girth below the configured floor");
  std::vector<char> in_x(static_cast<std::size_t>(g.n()), 0), in_b0(static_cast<std::size_t>(g.n()), 0);
  for (int x : X) in_x[static_cast<std::size_t>(x)] = 1;
  for (int b : B0) {
    if (in_x[static_cast<std::size_t>(b)])
      throw std::invalid_argument("cleaning_step: B0 must avoid X");
    in_b0[static_cast<std::size_t>(b)] = 1;
  }
  if (mpq_class(static_cast<long>(X.size())) < opts.min_x_fraction * g.n())
    throw std::invalid_argument("cleaning_step: |X| below the configured fraction of n");
  for (int x : X) {
    if (g.degree(x) < d)
      throw std::invalid_argument("cleaning_step: X member with degree below d");
    bool touches = false;
    for (int w : g.neighbors(x)) touches |= (in_b0[static_cast<std::size_t>(w)] != 0);
    if (!touches)
      throw std::invalid_argument("cleaning_step: vertex " + std::to_string(x) +
                                  " has no neighbor in B0");
  }
  long delta0 = 800L * d;
  long long kappa = 30'000'000LL * d * d * d * d;
  std::vector<int> Z;
  for (int x : X)
    if (g.degree(x) <= delta0) Z.push_back(x);
  pre.data["n"] = g.n();
  detail::record_set(pre, "X", X);
  detail::record_set(pre, "Z", Z);
  pre.data["delta0"] = delta0;
  pre.data["kappa"] = kappa;
  res.trace.end();

  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    auto& stage = res.trace.begin("halving_" + std::to_string(attempt));
    auto rng = make_rng(opts.seed, static_cast<std::uint64_t>(attempt));
    std::vector<char> in_z1(static_cast<std::size_t>(g.n()), 0);
    std::vector<int> Z1;
    for (int z : Z)
      if (bernoulli_exact(rng, 1, 2)) {
        in_z1[static_cast<std::size_t>(z)] = 1;
        Z1.push_back(z);
      }
    long long boundary_edges = 0;
    for (int z : Z1)
      for (int w : g.neighbors(z))
        if (!in_z1[static_cast<std::size_t>(w)]) ++boundary_edges;
    detail::record_set(stage, "Z1", Z1);
    stage.data["e_Z1_out"] = boundary_edges;
    bool cut_ok = 4 * boundary_edges >= static_cast<long long>(d + 1) * static_cast<long long>(Z.size());
    stage.data["cut_gate"] = cut_ok;
    if (!cut_ok) {
      res.trace.end();
      continue;
    }

    std::vector<int> U, U_minus;
    for (int u = 0; u < g.n(); ++u) {
      if (in_z1[static_cast<std::size_t>(u)]) continue;
      long long dz1 = 0;
      for (int w : g.neighbors(u)) dz1 += in_z1[static_cast<std::size_t>(w)];
      if (dz1 >= 2) {
        U.push_back(u);
        if (dz1 <= kappa) U_minus.push_back(u);
      }
    }
    detail::record_set(stage, "U", U);
    detail::record_set(stage, "U_minus_Uprime", U_minus);

    // largest color class of a (d+1)-coloring of g[U \ U']
    auto sub = g.induced(U_minus);
    auto sub_ord = degeneracy_order(sub.graph);
    auto colors = greedy_color(sub.graph, sub_ord);
    int color_count = sub.graph.n() == 0 ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(std::max(color_count, 1)));
    for (int v = 0; v < sub.graph.n(); ++v)
      classes[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])].push_back(
          sub.orig[static_cast<std::size_t>(v)]);
    std::vector<int> Y;
    for (const auto& cls : classes)
      if (cls.size() > Y.size()) Y = cls;
    detail::record_set(stage, "Y", Y);

    // conclusion (i): |Y| >= coeff * n / (d^3 (d+1)); retryable
    mpq_class bound = opts.size_coeff * g.n() / (mpq_class(d) * d * d * (d + 1));
    bool size_ok = mpq_class(static_cast<long>(Y.size())) >= bound;
    stage.data["size_gate"] = size_ok;
    res.trace.end();
    if (!size_ok || Y.empty()) continue;

    // conclusions (ii)-(iv) are structural; violations are implementation bugs
    if (!is_independent_set(g, Y)) throw std::logic_error("cleaning_step: Y not independent");
    for (int y : Y) {
      long long dx = 0;
      for (int w : g.neighbors(y)) dx += in_z1[static_cast<std::size_t>(w)];
      if (dx < 2 || dx > kappa) throw std::logic_error("cleaning_step: degree window violated");
    }
    for (int x : Z1)
      if (g.degree(x) > delta0) throw std::logic_error("cleaning_step: X' degree cap violated");

    res.sets = {std::move(Z1), std::move(Y)};
    return res;
  }
  res.failure = "retries exhausted without satisfying the cut and size gates";
  return res;
}

// ---------------------------------------------------------------------------
// Core extraction with retained degrees
// ---------------------------------------------------------------------------

struct CoreResult {
  Block block;
  std::vector<int> retained;  // members x of B' in the block with d_H(x) >= d_G(x) - 2k^2
  std::string diagnostic;
};

/// Block decomposition followed by selection of the block with the highest
/// density of usable B-vertices. Returns the block plus the recomputed
/// retained set.
inline std::optional<CoreResult> core_with_retained_degrees(const Graph& h, int k,
                                                            const mpz_class& D, int m,
                                                            const std::vector<int>& B,
                                                            bool relax_mindeg = false,
                                                            PipelineTrace* trace = nullptr) {
  if (k < 2) throw std::invalid_argument("core_with_retained_degrees: k must be >= 2");
  if (!relax_mindeg && h.min_degree() < 9LL * k * k)
    throw std::invalid_argument("core_with_retained_degrees: min degree below 9k^2");
  if (mpz_class(h.max_degree()) > D)
    throw std::invalid_argument("core_with_retained_degrees: max degree above D");
  if (mpz_class(static_cast<long>(B.size())) * D < h.n())
    throw std::invalid_argument("core_with_retained_degrees: |B| below n/D");
  if (!relax_mindeg && !detail::girth_at_least(h, 2L * m + 2))
    throw std::invalid_argument("core_with_retained_degrees: girth below 2m+2");

  long long two_k2 = 2LL * k * k;
  auto dec = block_decomposition(h, k, 4LL * k * k);
  if (trace) {
    auto& st = trace->begin("block_decomposition");
    st.data["blocks"] = dec.blocks.size();
    st.data["complete"] = dec.complete;
    trace->end();
  }
  if (!dec.complete) {
    return std::nullopt;
  }
  if (dec.blocks.empty()) return std::nullopt;

  std::vector<char> in_s(static_cast<std::size_t>(h.n()), 0), in_z(static_cast<std::size_t>(h.n()), 0);
  for (const auto& b : dec.blocks)
    for (int v : b.boundary) in_s[static_cast<std::size_t>(v)] = 1;
  for (const auto& z : dec.deleted)
    for (int v : z) in_z[static_cast<std::size_t>(v)] = 1;

  // W = S u Z u N(S) u Q with Q = {v outside S u Z : d_Z(v) > 2k^2}
  std::vector<char> in_w(static_cast<std::size_t>(h.n()), 0);
  for (int v = 0; v < h.n(); ++v) {
    if (in_s[static_cast<std::size_t>(v)] || in_z[static_cast<std::size_t>(v)]) {
      in_w[static_cast<std::size_t>(v)] = 1;
      continue;
    }
    long long dz = 0;
    for (int w : h.neighbors(v)) dz += in_z[static_cast<std::size_t>(w)];
    if (dz > two_k2) in_w[static_cast<std::size_t>(v)] = 1;
  }
  for (int v = 0; v < h.n(); ++v)
    if (in_s[static_cast<std::size_t>(v)])
      for (int w : h.neighbors(v)) in_w[static_cast<std::size_t>(w)] = 1;

  std::vector<char> in_bprime(static_cast<std::size_t>(h.n()), 0);
  for (int b : B)
    if (!in_w[static_cast<std::size_t>(b)]) in_bprime[static_cast<std::size_t>(b)] = 1;

  // block maximizing |B' & V_t| / |V_t|, exact fraction compare
  int best = -1;
  long long best_num = -1, best_den = 1;
  for (std::size_t t = 0; t < dec.blocks.size(); ++t) {
    long long num = 0;
    for (int v : dec.blocks[t].vertices) num += in_bprime[static_cast<std::size_t>(v)];
    long long den = static_cast<long long>(dec.blocks[t].vertices.size());
    if (best < 0 || num * best_den > best_num * den) {
      best = static_cast<int>(t);
      best_num = num;
      best_den = den;
    }
  }

  CoreResult out;
  out.block = dec.blocks[static_cast<std::size_t>(best)];
  std::vector<char> in_block(static_cast<std::size_t>(h.n()), 0);
  for (int v : out.block.vertices) in_block[static_cast<std::size_t>(v)] = 1;
  for (int v : out.block.vertices) {
    if (!in_bprime[static_cast<std::size_t>(v)]) continue;
    long long deg_inside = 0;
    for (int w : h.neighbors(v)) deg_inside += in_block[static_cast<std::size_t>(w)];
    if (deg_inside >= h.degree(v) - two_k2) out.retained.push_back(v);
  }
  if (trace) {
    auto& st = trace->begin("core_selection");
    st.data["block_size"] = out.block.vertices.size();
    st.data["retained"] = out.retained.size();
    trace->end();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assembling a subdivision from branch witnesses
// ---------------------------------------------------------------------------

struct AssembleResult {
  std::optional<SubdivisionCertificate> certificate;  // on the path system's host
  std::string diagnostic;
};

/// Select s branch vertices independent in the combined adjacency, assign
/// witness classes to peers injectively, link the chosen class
/// representatives inside the block, expand through the recorded paths and
/// take shortest induced paths. Never emits an unverified certificate.
inline AssembleResult assemble_subdivision(const PathSystem& ps, const Graph& block_aux,
                                           const std::vector<int>& good,
                                           const std::map<int, BranchWitness>& witnesses, int s,
                                           std::uint64_t linkage_budget = 10'000'000) {
  AssembleResult res;
  if (s < 3) {
    res.diagnostic = "s must be >= 3";
    return res;
  }
  // Gamma: adjacency in the block or in the host between root vertices
  auto gamma_adjacent = [&](int x, int y) {
    if (block_aux.has_edge(x, y)) return true;
    return ps.host.has_edge(ps.roots[static_cast<std::size_t>(x)], ps.roots[static_cast<std::size_t>(y)]);
  };
  std::vector<int> branch;
  for (int cand : good) {
    if (!witnesses.count(cand)) continue;
    bool clash = false;
    for (int b : branch) clash |= gamma_adjacent(cand, b);
    if (!clash) branch.push_back(cand);
    if (static_cast<int>(branch.size()) == s) break;
  }
  if (static_cast<int>(branch.size()) < s) {
    res.diagnostic = "fewer than s pairwise independent witnessed vertices";
    return res;
  }

  // representative selection: for each branch v_i assign its witness classes
  // to the other branch vertices injectively and pick pairwise distinct
  // block-neighbors; small backtracking over class-to-peer bijections
  std::vector<char> in_branch(static_cast<std::size_t>(block_aux.n()), 0);
  for (int b : branch) in_branch[static_cast<std::size_t>(b)] = 1;
  std::set<int> taken;
  // rep[i][j]: representative u_j^{(i)} in N_block(v_i), for peer j != i
  std::vector<std::vector<int>> rep(static_cast<std::size_t>(s), std::vector<int>(static_cast<std::size_t>(s), -1));

  std::function<bool(int)> pick_for = [&](int i) -> bool {
    if (i == s) return true;
    const BranchWitness& w = witnesses.at(branch[static_cast<std::size_t>(i)]);
    int a = static_cast<int>(w.M.size());
    std::vector<int> peers;
    for (int j = 0; j < s; ++j)
      if (j != i) peers.push_back(j);
    if (a < static_cast<int>(peers.size())) return false;
    // classes usable inside the block
    std::vector<std::vector<int>> usable(w.M.size());
    for (std::size_t c = 0; c < w.M.size(); ++c)
      for (int m : w.M[c])
        if (block_aux.has_edge(branch[static_cast<std::size_t>(i)], m) && !in_branch[static_cast<std::size_t>(m)])
          usable[c].push_back(m);
    // try class-to-peer injections: peers in order, classes by permutation
    std::vector<int> class_ids(w.M.size());
    for (std::size_t c = 0; c < class_ids.size(); ++c) class_ids[static_cast<std::size_t>(c)] = static_cast<int>(c);
    std::sort(class_ids.begin(), class_ids.end());
    do {
      std::vector<int> chosen;
      bool ok = true;
      for (std::size_t pj = 0; pj < peers.size() && ok; ++pj) {
        int cls = class_ids[pj];
        ok = false;
        for (int cand : usable[static_cast<std::size_t>(cls)]) {
          if (taken.count(cand)) continue;
          if (std::find(chosen.begin(), chosen.end(), cand) != chosen.end()) continue;
          chosen.push_back(cand);
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      for (std::size_t pj = 0; pj < peers.size(); ++pj) {
        rep[static_cast<std::size_t>(i)][static_cast<std::size_t>(peers[pj])] = chosen[pj];
        taken.insert(chosen[pj]);
      }
      if (pick_for(i + 1)) return true;
      for (std::size_t pj = 0; pj < peers.size(); ++pj) {
        taken.erase(chosen[pj]);
        rep[static_cast<std::size_t>(i)][static_cast<std::size_t>(peers[pj])] = -1;
      }
    } while (std::next_permutation(class_ids.begin(), class_ids.end()));
    return false;
  };
  if (!pick_for(0)) {
    res.diagnostic = "could not select pairwise distinct class representatives";
    return res;
  }

  // linkage inside the block minus the branch vertices
  Graph block_minus(block_aux.n());
  for (const auto& [u, v] : block_aux.edges())
    if (!in_branch[static_cast<std::size_t>(u)] && !in_branch[static_cast<std::size_t>(v)])
      block_minus.add_edge(u, v);
  LinkageInstance inst;
  inst.host = block_minus;
  std::vector<std::pair<int, int>> pair_index;  // (i, j) per instance pair
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      inst.pairs.push_back({rep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                            rep[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]});
      pair_index.push_back({i, j});
    }
  auto linked = solve_linkage(inst, linkage_budget);
  if (linked.status != SearchStatus::found) {
    res.diagnostic = linked.status == SearchStatus::budget_exhausted
                         ? "linkage budget exhausted"
                         : "no disjoint linkage among class representatives";
    return res;
  }

  // expand every linkage path through the recorded host paths and take
  // shortest induced host paths inside the unions
  SubdivisionCertificate cert;
  cert.pattern = complete_graph(s);
  for (int b : branch) cert.branch.push_back(ps.roots[static_cast<std::size_t>(b)]);
  for (std::size_t pi = 0; pi < inst.pairs.size(); ++pi) {
    auto [i, j] = pair_index[pi];
    std::vector<int> hull;
    auto absorb = [&](const std::vector<int>& host_path) {
      hull.insert(hull.end(), host_path.begin(), host_path.end());
    };
    absorb(ps.oriented_path(branch[static_cast<std::size_t>(i)],
                            rep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    const auto& q_path = linked.paths[pi];
    for (std::size_t t = 0; t + 1 < q_path.size(); ++t)
      absorb(ps.oriented_path(q_path[t], q_path[t + 1]));
    absorb(ps.oriented_path(rep[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                            branch[static_cast<std::size_t>(j)]));
    std::sort(hull.begin(), hull.end());
    hull.erase(std::unique(hull.begin(), hull.end()), hull.end());
    auto path = shortest_induced_path(ps.host, hull, ps.roots[static_cast<std::size_t>(branch[static_cast<std::size_t>(i)])],
                                      ps.roots[static_cast<std::size_t>(branch[static_cast<std::size_t>(j)])]);
    if (!path) {
      res.diagnostic = "no induced path inside the expanded union";
      return res;
    }
    cert.paths[{i, j}] = *path;
  }

  auto rep_check = verify(ps.host, cert);
  if (!rep_check.is_induced || !rep_check.is_proper) {
    res.diagnostic = "assembled certificate failed verification";
    return res;
  }
  res.certificate = std::move(cert);
  return res;
}

// ---------------------------------------------------------------------------
// Induced Mader pipeline
// ---------------------------------------------------------------------------

struct MaderOptions {
  std::uint64_t seed = 0;
  int retries = 10;
  std::uint64_t linkage_budget = 10'000'000;
  bool relax_girth = false;    // downgrade the girth precondition to a warning
  bool relax_core = false;     // relax the core min-degree/girth preconditions
  WitnessOptions witness_opts;
};

/// Full orchestration of the robust-branching argument on a bounded-degree
/// host: minimal-subgraph reduction, separated roots, path system, sampled
/// auxiliary graph with the direct bad-event check, core extraction and
/// assembly. Success probability at relaxed constants is not claimed; any
/// returned certificate verified induced and proper.
inline PipelineResult induced_mader(const Graph& J, const MaderParameters& params,
                                    const MaderOptions& opts = {}) {
  PipelineResult res;
  auto& pre = res.trace.begin("preconditions");
  if (mpz_class(J.max_degree()) > params.D)
    throw std::invalid_argument("induced_mader: max degree exceeds D");
  // d(J) > s-2+eta, exact rational comparison
  mpq_class avg = J.n() == 0 ? mpq_class(0) : mpq_class(2) * static_cast<long>(J.m()) / J.n();
  mpq_class density_floor = mpq_class(params.s - 2) + params.eta;
  if (!(avg > density_floor))
    throw std::invalid_argument("induced_mader: average degree not above s-2+eta");
  auto gj = girth(J);
  bool girth_ok = !gj || mpz_class(*gj) >= params.girth_threshold;
  pre.data["girth_ok"] = girth_ok;
  if (!girth_ok && !opts.relax_girth)
    throw std::invalid_argument("induced_mader: girth below the threshold");
  pre.data["n"] = J.n();
  pre.data["m"] = static_cast<long long>(J.m());
  res.trace.end();

  // minimal-subgraph reduction: repeatedly delete the smallest-index vertex
  // whose removal preserves e > alpha * n
  auto& redstage = res.trace.begin("minimal_reduction");
  std::vector<int> keep;
  for (int v = 0; v < J.n(); ++v) keep.push_back(v);
  Graph cur = J;
  std::vector<int> cur_orig = keep;
  for (;;) {
    mpq_class alpha_n1 = params.alpha * (cur.n() - 1);
    int victim = -1;
    for (int v = 0; v < cur.n(); ++v) {
      mpq_class e_after = mpq_class(static_cast<long>(cur.m() - cur.degree(v)));
      if (e_after > alpha_n1) {
        victim = v;
        break;
      }
    }
    if (victim < 0) break;
    std::vector<int> rest;
    for (int v = 0; v < cur.n(); ++v)
      if (v != victim) rest.push_back(v);
    auto sub = cur.induced(rest);
    std::vector<int> next_orig;
    for (int v : sub.orig) next_orig.push_back(cur_orig[static_cast<std::size_t>(v)]);
    cur = std::move(sub.graph);
    cur_orig = std::move(next_orig);
  }
  redstage.data["reduced_n"] = cur.n();
  redstage.data["reduced_m"] = static_cast<long long>(cur.m());
  res.trace.end();
  if (cur.n() == 0) {
    res.failure = "minimal reduction emptied the host";
    return res;
  }

  // U, separated roots, path system
  auto& roots_stage = res.trace.begin("separated_roots");
  std::vector<int> U;
  for (int v = 0; v < cur.n(); ++v)
    if (cur.degree(v) >= params.a) U.push_back(v);
  auto sep = separated_roots(cur, params.ell, U);
  detail::record_set(roots_stage, "U", U);
  roots_stage.data["roots"] = sep.roots.size();
  roots_stage.data["seeded"] = sep.seeded_count;
  res.trace.end();
  if (sep.roots.empty()) {
    res.failure = "no separated roots";
    return res;
  }

  PathSystem ps;
  try {
    ps = build_path_system(cur, sep, params.ell);
  } catch (const PathSystemError& e) {
    res.failure = std::string("path system: ") + e.what();
    return res;
  }
  {
    auto& st = res.trace.begin("path_system");
    st.data["aux_edges"] = ps.edges.size();
    res.trace.end();
  }

  // the seeded roots as compact indices
  std::set<int> seeded_compact;
  for (int i = 0; i < sep.seeded_count; ++i)
    seeded_compact.insert(ps.root_idx[static_cast<std::size_t>(sep.roots[static_cast<std::size_t>(i)])]);

  long q_threshold = params.Q;
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    auto& st = res.trace.begin("sample_" + std::to_string(attempt));
    auto rng = make_rng(opts.seed, 0x5a000ULL + static_cast<std::uint64_t>(attempt));
    auto sampled = sample_aux_graph(ps, params.p, rng);
    st.data["S_size"] = sampled.sampled.size();
    st.data["H_edges"] = static_cast<long long>(sampled.aux.m());

    auto witnesses = branch_witnesses(ps, sampled.aux, params.a, q_threshold, opts.witness_opts,
                                      split_seed(opts.seed, 0xa11ceULL + static_cast<std::uint64_t>(attempt)));
    st.data["witnessed"] = witnesses.size();

    // direct check replacing the local lemma: every seeded root that was
    // sampled must be branchable
    bool bad_event = false;
    int seeded_in_s = 0;
    for (int y : sampled.sampled)
      if (seeded_compact.count(y)) {
        ++seeded_in_s;
        if (!witnesses.count(y)) bad_event = true;
      }
    st.data["seeded_in_S"] = seeded_in_s;
    st.data["bad_event"] = bad_event;
    res.trace.end();
    if (seeded_in_s == 0 || bad_event) continue;

    std::vector<int> B_H;
    for (const auto& [y, w] : witnesses) B_H.push_back(y);

    std::optional<CoreResult> core;
    try {
      core = core_with_retained_degrees(sampled.aux, static_cast<int>(params.q),
                                        params.D0, params.m, B_H, opts.relax_core, &res.trace);
    } catch (const std::invalid_argument& e) {
      res.failure = std::string("core preconditions: ") + e.what();
      return res;
    }
    if (!core) continue;

    // block-restricted auxiliary graph
    std::vector<char> in_block(static_cast<std::size_t>(sampled.aux.n()), 0);
    for (int v : core->block.vertices) in_block[static_cast<std::size_t>(v)] = 1;
    Graph block_aux(sampled.aux.n());
    for (const auto& [u, v] : sampled.aux.edges())
      if (in_block[static_cast<std::size_t>(u)] && in_block[static_cast<std::size_t>(v)])
        block_aux.add_edge(u, v);

    auto assembled = assemble_subdivision(ps, block_aux, core->retained, witnesses, params.s,
                                          opts.linkage_budget);
    {
      auto& ast = res.trace.begin("assemble_" + std::to_string(attempt));
      ast.data["ok"] = assembled.certificate.has_value();
      if (!assembled.certificate) ast.data["diagnostic"] = assembled.diagnostic;
      res.trace.end();
    }
    if (!assembled.certificate) continue;

    // map back to the input graph through the reduction
    auto to_orig = [&](int v) { return cur_orig[static_cast<std::size_t>(v)]; };
    SubdivisionCertificate cert = *assembled.certificate;
    for (int& b : cert.branch) b = to_orig(b);
    for (auto& [key, path] : cert.paths)
      for (int& v : path) v = to_orig(v);
    auto final_rep = verify(J, cert);
    if (!final_rep.is_induced || !final_rep.is_proper)
      throw std::logic_error("induced_mader: certificate failed final verification");
    res.certificate = std::move(cert);
    res.report = final_rep;
    return res;
  }
  res.failure = "retries exhausted (sampling/bad-event/core/assembly gates)";
  return res;
}

}  // namespace isd

#endif  // ISD_PIPELINE_HPP
