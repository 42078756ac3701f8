#pragma once

// Local deterministic strategies of the (n, 2, 3) permutationally invariant
// scenario, parametrized by counts c[a][a'] of parties that answer a to
// setting 0 and a' to setting 1. All arithmetic is exact.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bellchaos {

struct LdsCounts {
  std::array<std::array<std::int64_t, 3>, 3> c{};

  std::int64_t parties() const;
  bool valid() const;
  std::string to_string() const;

  friend bool operator==(const LdsCounts&, const LdsCounts&) = default;
};

/// Collective one- and two-body values of a deterministic strategy.
struct LdsTable {
  /// one_body[a][x] = P(a|x)
  std::array<std::array<std::int64_t, 2>, 3> one_body{};
  /// two_body[a][b][x][y] = P(ab|xy) = P(a|x) P(b|y) - Q(ab|xy)
  std::array<std::array<std::array<std::array<std::int64_t, 2>, 2>, 3>, 3> two_body{};
};

LdsTable lds_probabilities(const LdsCounts& counts);

/// Bell value assembled from the table with the inequality's coefficients.
std::int64_t bell_value_from_table(const LdsTable& table);

/// Closed-form polynomial in the counts (c_22 does not appear).
std::int64_t bell_value_from_counts(const LdsCounts& counts);

struct EquivalenceReport {
  int n = 0;
  std::int64_t checked = 0;
  bool exhaustive = false;
  bool all_equal = true;
  std::vector<LdsCounts> mismatches;
};

/// Checks bell_value_from_table(lds_probabilities(c)) == bell_value_from_counts(c).
/// With trials <= 0 every composition of n is checked; otherwise `trials`
/// uniformly random compositions.
EquivalenceReport verify_polynomial_equivalence(int n, std::int64_t trials, std::uint64_t seed);

enum class SearchMode { kExhaustive, kStochastic };

struct ClassicalSearchConfig {
  SearchMode mode = SearchMode::kExhaustive;
  /// Random starting compositions in stochastic mode.
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Exhaustive mode refuses more states than this.
  std::int64_t max_states = 200'000'000;
  unsigned workers = 0;
};

struct ClassicalMinimum {
  int n = 0;
  SearchMode mode = SearchMode::kExhaustive;
  std::int64_t minimum = 0;
  LdsCounts argmin;
  std::int64_t states_visited = 0;
};

/// C(n + 8, 8), the number of strategy classes for n parties.
std::int64_t composition_count(int n);

/// Minimum of the Bell polynomial over all strategy classes (exhaustive) or
/// over random starts refined by greedy unit transfers between cells.
ClassicalMinimum minimize_classical(int n, const ClassicalSearchConfig& config);

/// Visits every composition of n into nine cells in lexicographic order of
/// the flattened grid, starting with c[0][0] fixed to `first` if first >= 0.
template <typename Fn>
void for_each_composition(int n, int first, Fn&& fn) {
  LdsCounts counts;
  auto recurse = [&](auto&& self, int cell, std::int64_t remaining) -> void {
    auto& slot = counts.c[static_cast<std::size_t>(cell / 3)][static_cast<std::size_t>(cell % 3)];
    if (cell == 8) {
      slot = remaining;
      fn(static_cast<const LdsCounts&>(counts));
      return;
    }
    std::int64_t lo = 0, hi = remaining;
    if (cell == 0 && first >= 0) {
      if (first > remaining) return;
      lo = hi = first;
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      slot = v;
      self(self, cell + 1, remaining - v);
    }
  };
  recurse(recurse, 0, n);
}

}  // namespace bellchaos
