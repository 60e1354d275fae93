#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "isd/certificate_io.hpp"
#include "isd/generators.hpp"
#include "isd/invariants.hpp"
#include "isd/rng.hpp"
#include "isd/subdivision.hpp"
#include "test_support.hpp"

using namespace isd;

namespace {

// Rebuild a host with one extra edge.
Graph with_extra_edge(const Graph& g, int u, int v) {
  Graph h = g;
  h.add_edge(u, v);
  return h;
}

}  // namespace

TEST_CASE("verify: clique is an induced but improper subdivision of itself") {
  Graph k4 = complete_graph(4);
  SubdivisionCertificate cert;
  cert.pattern = k4;
  cert.branch = {0, 1, 2, 3};
  for (const auto& [u, v] : k4.edges()) cert.paths[{u, v}] = {u, v};
  auto rep = verify(k4, cert);
  CHECK(rep.is_subdivision);
  CHECK(rep.is_induced);
  CHECK(!rep.is_proper);
}

TEST_CASE("verify: canonical 1-subdivision of K4") {
  auto [host, cert] = one_subdivision(complete_graph(4));
  CHECK(host.n() == 10);
  auto rep = verify(host, cert);
  CHECK(rep.is_subdivision);
  CHECK(rep.is_induced);
  CHECK(rep.is_proper);
  CHECK(rep.violations.empty());
}

TEST_CASE("verify: chord to a path interior is pinpointed") {
  // embed the 1-subdivision of K4 in a larger host and wire an extra vertex
  // to two internal vertices of different paths
  auto [sub, cert] = one_subdivision(complete_graph(4));
  Graph host(sub.n() + 1);
  for (const auto& [u, v] : sub.edges()) host.add_edge(u, v);
  int extra = sub.n();
  host.add_edge(extra, 4);  // internal vertex of one path
  host.add_edge(extra, 5);  // internal vertex of another
  auto rep = verify(host, cert);
  CHECK(rep.is_subdivision);
  CHECK(rep.is_induced);  // extra vertex is outside W, so still induced

  // now connect two path interiors directly: that is a chord inside W
  Graph bad = with_extra_edge(sub, 4, 5);
  auto rep2 = verify(bad, cert);
  CHECK(rep2.is_subdivision);
  CHECK(!rep2.is_induced);
  bool found_witness = false;
  for (const auto& v : rep2.violations)
    if (v.kind == "chord" && std::set<int>(v.witness.begin(), v.witness.end()) == std::set<int>{4, 5})
      found_witness = true;
  CHECK(found_witness);
}

TEST_CASE("verify: malformed certificates are a distinct failure") {
  auto [host, cert] = one_subdivision(complete_graph(4));
  {
    auto broken = cert;
    broken.branch[0] = host.n() + 3;
    CHECK_THROWS_AS(verify(host, broken), MalformedCertificate);
  }
  {
    auto broken = cert;
    broken.branch[0] = broken.branch[1];
    CHECK_THROWS_AS(verify(host, broken), MalformedCertificate);
  }
  {
    auto broken = cert;
    broken.paths.erase(broken.paths.begin());
    CHECK_THROWS_AS(verify(host, broken), MalformedCertificate);
  }
}

TEST_CASE("one_subdivision basics") {
  auto [c6, cert] = one_subdivision(complete_graph(3));
  CHECK(c6.n() == 6);
  CHECK(c6.m() == 6);
  CHECK(girth(c6) == 6);
  CHECK(verify(c6, cert).is_proper);

  auto [p2, cert2] = one_subdivision(path_graph(2));
  CHECK(p2.n() == 3);
  CHECK(p2.m() == 2);

  auto [pet, cert3] = one_subdivision(petersen_graph());
  CHECK(pet.n() == 25);
  CHECK(girth(pet) == 10);
  auto rep = verify(pet, cert3);
  CHECK((rep.is_induced && rep.is_proper));
}

TEST_CASE("verify covers isolated pattern vertices") {
  // pattern: one edge plus an isolated vertex; the isolated branch image is
  // part of W and must stay non-adjacent to the rest
  Graph pattern(3);
  pattern.add_edge(0, 1);
  Graph host(4);
  host.add_edge(0, 3);
  host.add_edge(3, 1);
  SubdivisionCertificate cert;
  cert.pattern = pattern;
  cert.branch = {0, 1, 2};
  cert.paths[{0, 1}] = {0, 3, 1};
  auto rep = verify(host, cert);
  CHECK(rep.is_subdivision);
  CHECK(rep.is_induced);
  CHECK(rep.is_proper);

  Graph chorded = host;
  chorded.add_edge(2, 3);  // isolated branch image touches a path interior
  auto rep2 = verify(chorded, cert);
  CHECK(rep2.is_subdivision);
  CHECK(!rep2.is_induced);
}

TEST_CASE("graph6 short/long form boundary") {
  for (int n : {61, 62, 63, 64}) {
    auto rng = make_rng(static_cast<std::uint64_t>(n));
    Graph g = random_graph_nm(n, 3 * n, rng);
    std::string enc = write_graph6(g);
    CHECK((n <= 62 ? enc[0] != '~' : enc[0] == '~'));
    CHECK(parse_graph6(enc) == g);
  }
}

TEST_CASE("one_subdivision output always verifies induced and proper") {
  auto rng = make_rng(305);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + static_cast<int>(uniform_below(rng, 8));
    int m = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n * (n - 1) / 2)));
    Graph h = random_graph_nm(n, m, rng);
    if (h.m() == 0) continue;
    auto [sub, cert] = one_subdivision(h);
    auto rep = verify(sub, cert);
    CHECK(rep.is_induced);
    CHECK(rep.is_proper);
  }
}

TEST_CASE("one_subdivision girth doubles") {
  auto rng = make_rng(300);
  for (int iter = 0; iter < 100; ++iter) {
    int n = 3 + static_cast<int>(uniform_below(rng, 8));
    Graph g = random_graph_np(n, 40, 100, rng);
    auto [sub, cert] = one_subdivision(g);
    auto g0 = girth(g);
    auto g1 = girth(sub);
    if (g0)
      CHECK(*g1 == 2 * *g0);
    else
      CHECK(!g1.has_value());
  }
}

TEST_CASE("shortest induced path") {
  Graph c6 = cycle_graph(6);
  std::vector<int> all{0, 1, 2, 3, 4, 5};
  auto p = shortest_induced_path(c6, all, 0, 3);
  REQUIRE(p.has_value());
  CHECK(p->size() == 4);  // length-3 path

  auto none = shortest_induced_path(c6, {0, 3}, 0, 3);
  CHECK(!none.has_value());

  auto rng = make_rng(301);
  for (int iter = 0; iter < 200; ++iter) {
    Graph g = random_graph_np(12, 30, 100, rng);
    std::vector<int> allowed;
    for (int v = 0; v < 12; ++v)
      if (uniform_below(rng, 4) != 0) allowed.push_back(v);
    if (allowed.size() < 2) continue;
    int u = allowed[uniform_below(rng, allowed.size())];
    int v = allowed[uniform_below(rng, allowed.size())];
    if (u == v) continue;
    auto path = shortest_induced_path(g, allowed, u, v);  // throws on chord
    if (!path) continue;
    CHECK(path->front() == u);
    CHECK(path->back() == v);
  }
}

TEST_CASE("find induced subdivision on named hosts") {
  // chordless C7 is an induced K3-subdivision
  auto r = find_induced_subdivision(cycle_graph(7), complete_graph(3));
  REQUIRE(r.status == SearchStatus::found);
  CHECK(verify(cycle_graph(7), *r.certificate).is_induced);

  // stars are acyclic: no K3-subdivision, and the search is a refutation
  auto none = find_induced_subdivision(star_graph(5), complete_graph(3));
  CHECK(none.status == SearchStatus::none_exists);

  // Petersen contains an induced K4-subdivision (Theorem 2.12 contrapositive:
  // girth 5 and min degree 3)...
  auto pet = find_induced_subdivision(petersen_graph(), complete_graph(4), 100'000'000, false);
  REQUIRE(pet.status == SearchStatus::found);
  auto rep = verify(petersen_graph(), *pet.certificate);
  CHECK(rep.is_induced);
  // ...but no PROPER one: properness forces all six paths to have length >= 2,
  // hence >= 10 vertices, hence a spanning induced subgraph -- which would be
  // Petersen itself with 15 edges, while a K4 1-subdivision has 12. The
  // complete search refutes properness.
  CHECK(!rep.is_proper);
  auto pet_proper = find_induced_subdivision(petersen_graph(), complete_graph(4), 500'000'000, true);
  CHECK(pet_proper.status == SearchStatus::none_exists);

  // tiny budget reports exhaustion
  auto tight = find_induced_subdivision(petersen_graph(), complete_graph(4), 10);
  CHECK(tight.status == SearchStatus::budget_exhausted);
}

TEST_CASE("find plain subdivision") {
  // K5 contains K4 as a (plain) subdivision with direct edges
  auto r = find_subdivision(complete_graph(5), complete_graph(4));
  REQUIRE(r.status == SearchStatus::found);
  CHECK(verify(complete_graph(5), *r.certificate).is_subdivision);

  // Petersen has a K5 topological minor? No: K5-subdivision needs five
  // degree-4 branch vertices but Petersen is cubic.
  auto none = find_subdivision(petersen_graph(), complete_graph(5), 100'000'000);
  CHECK(none.status == SearchStatus::none_exists);

  // but a K4-subdivision exists (non-induced search also finds it)
  auto k4 = find_subdivision(petersen_graph(), complete_graph(4));
  CHECK(k4.status == SearchStatus::found);
}

TEST_CASE("oracle equivalence: K3-subdivision iff some cycle exists") {
  auto rng = make_rng(302);
  Graph k3 = complete_graph(3);
  for (int iter = 0; iter < 2000; ++iter) {
    int n = 3 + static_cast<int>(uniform_below(rng, 7));
    int m = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n * (n - 1) / 2 + 1)));
    Graph g = random_connected_graph(n, m, rng);
    auto found = find_induced_subdivision(g, k3, 100'000'000);
    REQUIRE(found.status != SearchStatus::budget_exhausted);
    bool has_cycle = isd::testing::girth_by_edge_removal(g).has_value();
    REQUIRE((found.status == SearchStatus::found) == has_cycle);
    if (found.certificate) {
      auto rep = verify(g, *found.certificate);
      CHECK(rep.is_induced);
    }
  }
}

TEST_CASE("finder agrees with the independent subset-enumeration K4 oracle") {
  auto rng = make_rng(306);
  Graph k4 = complete_graph(4);
  for (int iter = 0; iter < 1500; ++iter) {
    int n = 4 + static_cast<int>(uniform_below(rng, 6));  // 4..9
    Graph g = random_graph_np(n, 20 + uniform_below(rng, 60), 100, rng);
    for (bool proper : {false, true}) {
      auto found = find_induced_subdivision(g, k4, 1'000'000'000, proper);
      REQUIRE(found.status != SearchStatus::budget_exhausted);
      bool oracle = isd::testing::exists_induced_k4_subdivision(g, proper);
      INFO("n=" << n << " proper=" << proper);
      REQUIRE((found.status == SearchStatus::found) == oracle);
      if (found.certificate) {
        auto rep = verify(g, *found.certificate);
        CHECK(rep.is_induced);
        if (proper) CHECK(rep.is_proper);
      }
    }
  }
  // independent confirmation of the Petersen facts: an improper induced
  // K4-subdivision exists, a proper one does not
  CHECK(isd::testing::exists_induced_k4_subdivision(petersen_graph(), false));
  CHECK(!isd::testing::exists_induced_k4_subdivision(petersen_graph(), true));
}

TEST_CASE("restrict_to_branches extracts a sub-certificate") {
  auto [host, cert] = one_subdivision(complete_graph(5));
  auto sub = restrict_to_branches(cert, {0, 2, 4});
  CHECK(sub.pattern == complete_graph(3));
  auto rep = verify(host, sub);
  CHECK(rep.is_induced);
  CHECK(rep.is_proper);
}

TEST_CASE("certificate json round trip") {
  auto [host, cert] = one_subdivision(petersen_graph());
  auto j = certificate_to_json(cert);
  auto back = certificate_from_json(j);
  CHECK(back.pattern == cert.pattern);
  CHECK(back.branch == cert.branch);
  CHECK(back.paths == cert.paths);
  CHECK_THROWS_AS(parse_certificate("{\"pattern\": 3}"), parse_error);
  CHECK_THROWS_AS(parse_certificate("{"), parse_error);
}

// ---------------------------------------------------------------------------
// Mutation soundness
// ---------------------------------------------------------------------------

namespace {

struct PaddedInstance {
  Graph host;
  SubdivisionCertificate cert;
};

// A valid induced+proper certificate from one_subdivision over a random
// pattern, embedded in a padded host (extra vertices wired arbitrarily among
// themselves and by at most one edge into W, which preserves induced-ness).
PaddedInstance make_padded(std::mt19937_64& rng) {
  int pn = 2 + static_cast<int>(uniform_below(rng, 7));  // pattern <= 8 vertices
  int pm = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(pn * (pn - 1) / 2)));
  Graph pattern = random_graph_nm(pn, pm, rng);
  if (pattern.m() == 0) pattern.add_edge(0, 1);
  auto [core, cert] = one_subdivision(pattern);

  int pad = 2 + static_cast<int>(uniform_below(rng, 6));
  Graph host(core.n() + pad);
  for (const auto& [u, v] : core.edges()) host.add_edge(u, v);
  for (int i = 0; i < pad; ++i) {
    int p = core.n() + i;
    if (i > 0 && uniform_below(rng, 2)) host.add_edge(p, core.n() + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i))));
    if (uniform_below(rng, 2)) host.add_edge(p, static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(core.n()))));
  }
  return {std::move(host), std::move(cert)};
}

}  // namespace

TEST_CASE("mutation suite flips exactly the right flags") {
  auto rng = make_rng(303);
  int made = 0;
  while (made < 120) {
    auto inst = make_padded(rng);
    auto base = verify(inst.host, inst.cert);
    REQUIRE(base.is_subdivision);
    REQUIRE(base.is_induced);
    REQUIRE(base.is_proper);
    ++made;

    const auto& cert = inst.cert;
    // collect internal vertices per path
    std::vector<std::pair<std::pair<int, int>, std::vector<int>>> internals;
    for (const auto& [key, path] : cert.paths)
      if (path.size() > 2)
        internals.push_back({key, std::vector<int>(path.begin() + 1, path.end() - 1)});

    // (a) host edge between internal vertices of different paths
    if (internals.size() >= 2) {
      int a = internals[0].second[0];
      int b = internals[1].second[0];
      if (!inst.host.has_edge(a, b)) {
        auto rep = verify(with_extra_edge(inst.host, a, b), cert);
        CHECK(rep.is_subdivision);
        CHECK(!rep.is_induced);
        CHECK(!rep.violations.empty());
      }
    }

    // (b) two paths share an internal vertex
    if (internals.size() >= 2) {
      auto broken = cert;
      auto key0 = internals[0].first;
      int shared = internals[1].second[0];
      auto& p0 = broken.paths[key0];
      // make path0 route through `shared`: rebuild it as start, shared, end
      // only meaningful when host edges exist; instead just overwrite an
      // internal vertex, breaking edge structure or disjointness
      auto host2 = inst.host;
      int victim = p0[1];
      if (!host2.has_edge(p0[0], shared)) host2.add_edge(p0[0], shared);
      if (!host2.has_edge(shared, p0.size() > 3 ? p0[2] : p0.back()))
        host2.add_edge(shared, p0.size() > 3 ? p0[2] : p0.back());
      p0[1] = shared;
      (void)victim;
      auto rep = verify(host2, broken);
      CHECK(!rep.is_subdivision);
      CHECK(!rep.is_induced);
    }

    // (c) edge between branch images of pattern-nonadjacent vertices
    {
      std::optional<std::pair<int, int>> nonadj;
      for (int p = 0; p < cert.pattern.n() && !nonadj; ++p)
        for (int q = p + 1; q < cert.pattern.n(); ++q)
          if (!cert.pattern.has_edge(p, q)) {
            nonadj = {p, q};
            break;
          }
      if (nonadj) {
        int a = cert.branch[static_cast<std::size_t>(nonadj->first)];
        int b = cert.branch[static_cast<std::size_t>(nonadj->second)];
        if (!inst.host.has_edge(a, b)) {
          auto rep = verify(with_extra_edge(inst.host, a, b), cert);
          CHECK(rep.is_subdivision);
          CHECK(!rep.is_induced);
        }
      }
    }

    // (d) edge between pattern-adjacent branch images with a length>=2 path
    {
      std::optional<std::pair<int, int>> adj;
      for (const auto& [key, path] : cert.paths)
        if (path.size() >= 3) {
          adj = key;
          break;
        }
      if (adj) {
        int a = cert.branch[static_cast<std::size_t>(adj->first)];
        int b = cert.branch[static_cast<std::size_t>(adj->second)];
        if (!inst.host.has_edge(a, b)) {
          auto rep = verify(with_extra_edge(inst.host, a, b), cert);
          CHECK(rep.is_subdivision);
          CHECK(!rep.is_induced);  // that edge is not a consecutive pair of any path
        }
      }
    }
  }
}
