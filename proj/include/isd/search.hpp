#ifndef ISD_SEARCH_HPP
#define ISD_SEARCH_HPP

#include <cstdint>

namespace isd {

/// Three-way outcome shared by all complete searches: a definite negative is
/// only reported when the search space was exhausted within budget.
enum class SearchStatus { found, none_exists, budget_exhausted };

/// Node-expansion budget. tick() returns false once the budget is exceeded.
struct Budget {
  std::uint64_t limit = 1'000'000;
  std::uint64_t used = 0;
  bool tick() { return ++used <= limit; }
  bool exhausted() const { return used > limit; }
};

}  // namespace isd

#endif  // ISD_SEARCH_HPP
