#ifndef ISD_PLANTED_HPP
#define ISD_PLANTED_HPP

#include <utility>
#include <vector>

#include "isd/graph.hpp"
#include "isd/mader_params.hpp"

namespace isd {

// Deterministic instance families with known recoverable structure. The
// construction is the oracle: each generator guarantees by design that the
// corresponding pipeline step can succeed, so recovery failures can only be
// retry exhaustion, never bad certificates.

// ---------------------------------------------------------------------------
// Unbalanced-step family
// ---------------------------------------------------------------------------

struct PlantedUnbalanced {
  Graph g;
  std::vector<int> A, B;
  int d = 0;
  long girth_floor = 6;  // the instance has girth exactly 6
};

/// The 1-subdivision of a complete hub graph: hubs form B, every hub pair is
/// joined through a private degree-2 A-vertex. Any sampled hub subset R with
/// |R| >= 2d+2 passes the X - Y > d|R| gate (all pair-vertices between
/// sampled hubs are good, the conflict graph is empty) and the auxiliary
/// graph is the complete graph on R, which contains K_{d+1} subdivisions
/// outright. Hub count 6d(2d+3) puts the expected |R| at 2d+3.
inline PlantedUnbalanced plant_unbalanced(int d) {
  if (d < 2) throw std::invalid_argument("plant_unbalanced: d must be >= 2");
  int hubs = 6 * d * (2 * d + 3);
  long long pairs = static_cast<long long>(hubs) * (hubs - 1) / 2;
  PlantedUnbalanced out;
  out.d = d;
  out.g = Graph(hubs + static_cast<int>(pairs));
  int next = hubs;
  for (int u = 0; u < hubs; ++u)
    for (int v = u + 1; v < hubs; ++v) {
      out.g.add_edge(u, next);
      out.g.add_edge(next, v);
      ++next;
    }
  for (int u = 0; u < hubs; ++u) out.B.push_back(u);
  for (int a = hubs; a < out.g.n(); ++a) out.A.push_back(a);
  return out;
}

// ---------------------------------------------------------------------------
// Cleaning-step family
// ---------------------------------------------------------------------------

struct PlantedCleaning {
  Graph g;
  std::vector<int> X, B0;
  int d = 0;
  long girth_floor = 4;  // bipartite with 4-cycles by design
};

/// Bipartite instance: 400 X-vertices of degree d = 4 wired into 80
/// B0-vertices of degree 20. The halving keeps the cut gate comfortable and
/// every B0 vertex lands in U with high probability, so Y is a large
/// independent set on the B0 side.
inline PlantedCleaning plant_cleaning() {
  const int nx = 400, nw = 80;
  PlantedCleaning out;
  out.d = 4;
  out.g = Graph(nx + nw);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < 4; ++j) out.g.add_edge(i, nx + (i + j * 20) % nw);
  for (int i = 0; i < nx; ++i) out.X.push_back(i);
  for (int w = 0; w < nw; ++w) out.B0.push_back(nx + w);
  return out;
}

// ---------------------------------------------------------------------------
// Induced-Mader family
// ---------------------------------------------------------------------------

struct PlantedMader {
  Graph J;
  MaderParameters params;  // desk constants tuned to the instance
};

/// Root-star-connector expansion of the complete bipartite plan K_{17,20}:
/// 37 roots pairwise at distance 3, one private length-3 connector per plan
/// edge. Every conflict list is exactly the edge's two roots, so with p = 1
/// the sampled auxiliary graph is the whole plan deterministically; the plan
/// is 2-connected with a large 16-core, the first three side-1 roots carry
/// staggered singleton witness classes pointing at six distinct side-2
/// roots, and the assembly has disjoint linkage routes through the remaining
/// side-1 roots. alpha is chosen so the minimal-subgraph reduction is a
/// no-op: alpha = (e-2)/(n-1) makes degree-2 deletions exactly infeasible.
inline PlantedMader plant_mader() {
  const int s1 = 17, s2 = 20;
  const int n_roots = s1 + s2;  // side 1: 0..16, side 2: 17..36
  std::vector<std::pair<int, int>> plan;
  for (int i = 0; i < 3; ++i) {  // staggered witness targets for roots 0,1,2
    plan.push_back({i, s1 + 2 * i});
    plan.push_back({i, s1 + 2 * i + 1});
  }
  for (int u = 0; u < s1; ++u)
    for (int v = s1; v < n_roots; ++v) {
      bool special = (u < 3) && (v == s1 + 2 * u || v == s1 + 2 * u + 1);
      if (!special) plan.push_back({u, v});
    }

  PlantedMader out;
  out.J = Graph(n_roots + 2 * static_cast<int>(plan.size()));
  int next = n_roots;
  for (const auto& [u, v] : plan) {
    int m1 = next++, m2 = next++;
    out.J.add_edge(u, m1);
    out.J.add_edge(m1, m2);
    out.J.add_edge(m2, v);
  }

  MaderParameters P;
  P.s = 3;
  P.a = 2;
  P.q = 2;
  P.Q = 1;
  P.ell = 1;
  P.L = 5;
  P.D = 20;
  P.D0 = 20;
  P.m = 1;
  P.girth_threshold = 12;  // girth(J) = 3 * girth(plan) = 12 exactly
  P.C = mpz_class(P.L + 1) * (P.D + 1);
  P.p = 1;
  long e = static_cast<long>(out.J.m());
  long n = out.J.n();
  P.alpha = mpq_class(e - 2) / mpq_class(n - 1);
  P.alpha.canonicalize();
  P.gamma = P.alpha - 1;
  P.eta = mpq_class(2 * e) / mpq_class(n) - (P.s - 2) - mpq_class(1, 100);
  P.eta.canonicalize();
  P.c0 = 1;
  P.mu_scaled = 0;
  out.params = std::move(P);
  return out;
}

}  // namespace isd

#endif  // ISD_PLANTED_HPP
