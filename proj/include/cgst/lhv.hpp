#pragma once

// Exhaustive search over deterministic local-hidden-variable strategies.

#include "cgst/bellspec.hpp"

#include <cstdint>
#include <vector>

namespace cgst::lhv {

// outcomes[i][a] in {-1, +1}: the answer of party i to setting a.
struct Strategy {
  std::vector<std::vector<int>> outcomes;

  void validate(const bell::BellSpec& spec) const;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct LhvResult {
  double min_value = 0.0;
  Strategy witness;
  std::uint64_t enumerated = 0;  // strategy classes evaluated
  bool complete = true;          // false when the budget stopped the search
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

double strategy_value(const Strategy& s, const bell::BellSpec& spec);

bell::CorrelatorTable deterministic_table(const Strategy& s, const bell::BellSpec& spec);

// Number of classes a complete search visits: multisets C(n + 2^k - 1, n) for
// zero phases, ordered tuples 2^(nk) otherwise. Saturates at UINT64_MAX.
std::uint64_t class_count(const bell::BellSpec& spec);

// Exact minimum over all deterministic strategies. Ties are broken towards the
// lexicographically smallest strategy (party 0 first, setting 0 first, -1 < +1).
// Parallel over the first party's vector.
LhvResult brute_force_min(const bell::BellSpec& spec, std::uint64_t budget = kDefaultBudget);

namespace reference {
// Single-threaded enumeration with the same ordering and tie-break.
LhvResult brute_force_min(const bell::BellSpec& spec, std::uint64_t budget = kDefaultBudget);
}  // namespace reference

}  // namespace cgst::lhv
