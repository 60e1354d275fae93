#ifndef ISD_PROJECTIVE_PLANE_HPP
#define ISD_PROJECTIVE_PLANE_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "isd/finite_field.hpp"
#include "isd/graph.hpp"
#include "isd/search.hpp"

namespace isd {

/// PG(2, q): points and lines are normalized homogeneous triples over
/// GF(q) (first nonzero coordinate scaled to 1); a point lies on a line iff
/// their dot product vanishes. Axioms are verified by direct counting on
/// construction.
class ProjectivePlane {
 public:
  using Triple = std::array<int, 3>;

  explicit ProjectivePlane(int q) : field_(q) {
    build();
    verify_axioms();
  }

  int q() const { return field_.q(); }
  const FiniteField& field() const { return field_; }
  int size() const { return static_cast<int>(points_.size()); }  // q^2+q+1
  const std::vector<Triple>& points() const { return points_; }
  const std::vector<Triple>& lines() const { return lines_; }

  bool incident(int point, int line) const {
    return incidence_[static_cast<std::size_t>(point) * lines_.size() + static_cast<std::size_t>(line)];
  }

  const std::vector<int>& lines_through(int point) const {
    return lines_through_[static_cast<std::size_t>(point)];
  }
  const std::vector<int>& points_on(int line) const {
    return points_on_[static_cast<std::size_t>(line)];
  }

  /// The unique line through two distinct points.
  int line_through(int p1, int p2) const {
    return line_through_[static_cast<std::size_t>(p1) * points_.size() + static_cast<std::size_t>(p2)];
  }

  bool collinear(int p1, int p2, int p3) const {
    if (p1 == p2 || p1 == p3 || p2 == p3) return true;
    return incident(p3, line_through(p1, p2));
  }

 private:
  void build() {
    const auto& F = field_;
    int q = F.q();
    // canonical representatives: (1,y,z), (0,1,z), (0,0,1)
    for (int y = 0; y < q; ++y)
      for (int z = 0; z < q; ++z) points_.push_back({1, y, z});
    for (int z = 0; z < q; ++z) points_.push_back({0, 1, z});
    points_.push_back({0, 0, 1});
    lines_ = points_;  // same normalization; interpretation differs

    auto dot = [&](const Triple& a, const Triple& b) {
      int s = 0;
      for (int i = 0; i < 3; ++i) s = F.add(s, F.mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]));
      return s;
    };
    std::size_t n = points_.size();
    incidence_.assign(n * n, 0);
    lines_through_.assign(n, {});
    points_on_.assign(n, {});
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t l = 0; l < n; ++l)
        if (dot(points_[p], lines_[l]) == 0) {
          incidence_[p * n + l] = 1;
          lines_through_[p].push_back(static_cast<int>(l));
          points_on_[l].push_back(static_cast<int>(p));
        }
    line_through_.assign(n * n, -1);
    for (std::size_t l = 0; l < n; ++l)
      for (int a : points_on_[l])
        for (int b : points_on_[l])
          if (a != b) line_through_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = static_cast<int>(l);
  }

  void verify_axioms() const {
    std::size_t n = points_.size();
    int q = field_.q();
    if (static_cast<long long>(n) != static_cast<long long>(q) * q + q + 1)
      throw std::logic_error("plane: wrong point count");
    for (std::size_t l = 0; l < n; ++l)
      if (static_cast<int>(points_on_[l].size()) != q + 1)
        throw std::logic_error("plane: line has wrong point count");
    for (std::size_t p = 0; p < n; ++p)
      if (static_cast<int>(lines_through_[p].size()) != q + 1)
        throw std::logic_error("plane: point has wrong line count");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        int count = 0;
        for (std::size_t l = 0; l < n; ++l)
          if (incidence_[a * n + l] && incidence_[b * n + l]) ++count;
        if (count != 1) throw std::logic_error("plane: two points not on exactly one line");
      }
  }

  FiniteField field_;
  std::vector<Triple> points_, lines_;
  std::vector<char> incidence_;
  std::vector<std::vector<int>> lines_through_, points_on_;
  std::vector<int> line_through_;
};

inline ProjectivePlane projective_plane(int q) {
  if (q > 64) throw std::invalid_argument("projective_plane: q must be <= 64");
  if (!FiniteField::prime_power(q))
    throw std::invalid_argument("projective_plane: q must be a prime power");
  return ProjectivePlane(q);
}

/// Bipartite point-line incidence graph: vertices 0..N-1 are points,
/// N..2N-1 are lines; (q+1)-regular with girth 6.
inline Graph incidence_graph(const ProjectivePlane& pl) {
  int n = pl.size();
  Graph g(2 * n);
  for (int p = 0; p < n; ++p)
    for (int l : pl.lines_through(p)) g.add_edge(p, n + l);
  return g;
}

inline nlohmann::ordered_json plane_to_json(const ProjectivePlane& pl) {
  nlohmann::ordered_json j;
  j["q"] = pl.q();
  auto triples = [](const std::vector<ProjectivePlane::Triple>& ts) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& t : ts) arr.push_back({t[0], t[1], t[2]});
    return arr;
  };
  j["points"] = triples(pl.points());
  j["lines"] = triples(pl.lines());
  auto& inc = j["incidence"] = nlohmann::ordered_json::array();
  for (int p = 0; p < pl.size(); ++p)
    for (int l : pl.lines_through(p)) inc.push_back({p, l});
  return j;
}

// ---------------------------------------------------------------------------
// Arcs
// ---------------------------------------------------------------------------

struct Arc {
  std::vector<int> points;  // no three collinear
};

struct ArcSearchResult {
  SearchStatus status = SearchStatus::none_exists;
  std::optional<Arc> arc;
  std::uint64_t nodes_expanded = 0;
};

/// Complete backtracking search for an arc of the given size, with
/// collinearity pruning via the covered-line set. With symmetry reduction the
/// first arc point is pinned to point 0 (sound for existence questions: the
/// collineation group is transitive on points). A completed search is a
/// genuine refutation.
inline ArcSearchResult max_arc(const ProjectivePlane& pl, int target,
                               std::uint64_t budget = 1'000'000'000,
                               bool symmetry_reduction = true) {
  if (target > pl.q() + 2) throw std::invalid_argument("max_arc: target exceeds q+2");
  ArcSearchResult res;
  if (target <= 0) {
    res.status = SearchStatus::found;
    res.arc = Arc{};
    return res;
  }
  int n = pl.size();
  Budget nodes{budget};
  std::vector<int> chosen;
  std::vector<int> covered;  // lines through >= 2 chosen points
  bool out_of_budget = false;

  std::function<bool(int)> extend = [&](int from) -> bool {
    if (static_cast<int>(chosen.size()) == target) return true;
    for (int cand = from; cand < n; ++cand) {
      if (!nodes.tick()) { out_of_budget = true; return false; }
      bool ok = true;
      for (int l : covered)
        if (pl.incident(cand, l)) { ok = false; break; }
      if (!ok) continue;
      std::size_t snapshot = covered.size();
      for (int prev : chosen) covered.push_back(pl.line_through(prev, cand));
      chosen.push_back(cand);
      if (extend(cand + 1)) return true;
      chosen.pop_back();
      covered.resize(snapshot);
      if (out_of_budget) return false;
    }
    return false;
  };

  bool ok;
  if (symmetry_reduction) {
    chosen.push_back(0);
    ok = extend(1);
  } else {
    ok = extend(0);
  }
  res.nodes_expanded = nodes.used;
  if (ok) {
    res.status = SearchStatus::found;
    res.arc = Arc{chosen};
    // re-verify: no three collinear
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = i + 1; j < chosen.size(); ++j)
        for (std::size_t k = j + 1; k < chosen.size(); ++k)
          if (pl.collinear(chosen[i], chosen[j], chosen[k]))
            throw std::logic_error("max_arc: returned arc has three collinear points");
  } else {
    res.status = out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::none_exists;
  }
  return res;
}

}  // namespace isd

#endif  // ISD_PROJECTIVE_PLANE_HPP
