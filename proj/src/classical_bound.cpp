#include "bellchaos/classical_bound.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bellchaos/common.hpp"
#include "bellchaos/parallel.hpp"

namespace bellchaos {

std::int64_t LdsCounts::parties() const {
  std::int64_t total = 0;
  for (const auto& row : c)
    for (std::int64_t v : row) total += v;
  return total;
}

bool LdsCounts::valid() const {
  for (const auto& row : c)
    for (std::int64_t v : row)
      if (v < 0) return false;
  return true;
}

std::string LdsCounts::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t a = 0; a < 3; ++a) {
    os << (a ? ",[" : "[") << c[a][0] << ',' << c[a][1] << ',' << c[a][2] << ']';
  }
  os << ']';
  return os.str();
}

LdsTable lds_probabilities(const LdsCounts& counts) {
  if (!counts.valid()) throw std::invalid_argument("lds_probabilities: negative count");
  const auto& c = counts.c;
  LdsTable t;
  for (std::size_t a = 0; a < 3; ++a) {
    t.one_body[a][0] = c[a][0] + c[a][1] + c[a][2];
    t.one_body[a][1] = c[0][a] + c[1][a] + c[2][a];
  }
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
          // Single-party overlap sum_i p_i(a|x) p_i(b|y).
          std::int64_t overlap = 0;
          if (x == y) {
            overlap = a == b ? t.one_body[a][x] : 0;
          } else {
            overlap = x == 0 ? c[a][b] : c[b][a];
          }
          t.two_body[a][b][x][y] = t.one_body[a][x] * t.one_body[b][y] - overlap;
        }
      }
    }
  }
  return t;
}

std::int64_t bell_value_from_table(const LdsTable& t) {
  const auto& p = t.one_body;
  const auto& pp = t.two_body;
  return p[0][0] + p[0][1] + p[1][0] + p[1][1] + pp[0][0][0][0] + pp[0][0][1][1] +
         pp[1][1][0][0] + pp[1][1][1][1] - 2 * (pp[0][1][0][1] + pp[0][1][1][0]);
}

std::int64_t bell_value_from_counts(const LdsCounts& counts) {
  const auto& c = counts.c;
  auto sq = [](std::int64_t v) { return v * v; };
  return sq(c[0][0] + c[0][2]) + sq(c[0][0] + c[2][0]) + sq(c[1][1] + c[1][2]) +
         sq(c[1][1] + c[2][1]) + sq(c[0][0] - c[1][2]) + sq(c[0][0] - c[2][1]) +
         sq(c[1][1] - c[0][2]) + sq(c[1][1] - c[2][0]) + 2 * (c[1][0] + c[0][1]) -
         2 * sq(c[0][0] + c[1][1]) - sq(c[1][2] + c[2][0]) - sq(c[0][2] + c[2][1]);
}

std::int64_t composition_count(int n) {
  if (n < 0) return 0;
  // C(n + 8, 8) computed incrementally; exact at every step.
  std::int64_t value = 1;
  for (std::int64_t k = 1; k <= 8; ++k) value = value * (n + k) / k;
  return value;
}

namespace {

LdsCounts random_composition(int n, std::mt19937_64& rng) {
  // Stars and bars: eight distinct bar positions among n + 8 slots.
  std::vector<int> slots(static_cast<std::size_t>(n + 8));
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
  std::array<int, 8> bars{};
  for (std::size_t k = 0; k < 8; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, slots.size() - 1);
    std::swap(slots[k], slots[pick(rng)]);
    bars[k] = slots[k];
  }
  std::sort(bars.begin(), bars.end());
  LdsCounts counts;
  int prev = -1;
  for (std::size_t cell = 0; cell < 9; ++cell) {
    const int end = cell < 8 ? bars[cell] : n + 8;
    counts.c[cell / 3][cell % 3] = end - prev - 1;
    prev = end;
  }
  return counts;
}

/// Steepest descent by unit transfers between cells; returns the local minimum.
std::int64_t greedy_descent(LdsCounts& counts, std::int64_t& visited) {
  std::int64_t value = bell_value_from_counts(counts);
  for (;;) {
    std::int64_t best = value;
    int best_from = -1, best_to = -1;
    for (int from = 0; from < 9; ++from) {
      auto& src = counts.c[static_cast<std::size_t>(from / 3)][static_cast<std::size_t>(from % 3)];
      if (src == 0) continue;
      for (int to = 0; to < 9; ++to) {
        if (to == from) continue;
        auto& dst = counts.c[static_cast<std::size_t>(to / 3)][static_cast<std::size_t>(to % 3)];
        --src;
        ++dst;
        const std::int64_t v = bell_value_from_counts(counts);
        ++visited;
        ++src;
        --dst;
        if (v < best) {
          best = v;
          best_from = from;
          best_to = to;
        }
      }
    }
    if (best_from < 0) return value;
    --counts.c[static_cast<std::size_t>(best_from / 3)][static_cast<std::size_t>(best_from % 3)];
    ++counts.c[static_cast<std::size_t>(best_to / 3)][static_cast<std::size_t>(best_to % 3)];
    value = best;
  }
}

}  // namespace

EquivalenceReport verify_polynomial_equivalence(int n, std::int64_t trials, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("verify_polynomial_equivalence: n must be at least 1");
  EquivalenceReport report;
  report.n = n;
  auto check = [&](const LdsCounts& c) {
    ++report.checked;
    if (bell_value_from_table(lds_probabilities(c)) != bell_value_from_counts(c)) {
      report.all_equal = false;
      if (report.mismatches.size() < 16) report.mismatches.push_back(c);
    }
  };
  if (trials <= 0) {
    report.exhaustive = true;
    for_each_composition(n, -1, check);
  } else {
    std::mt19937_64 rng(seed);
    for (std::int64_t t = 0; t < trials; ++t) check(random_composition(n, rng));
  }
  return report;
}

ClassicalMinimum minimize_classical(int n, const ClassicalSearchConfig& config) {
  if (n < 1) throw std::invalid_argument("minimize_classical: n must be at least 1");
  ClassicalMinimum result;
  result.n = n;
  result.mode = config.mode;
  result.minimum = std::numeric_limits<std::int64_t>::max();

  if (config.mode == SearchMode::kExhaustive) {
    if (composition_count(n) > config.max_states) {
      throw BudgetExceeded("minimize_classical: " + std::to_string(composition_count(n)) +
                           " strategy classes exceed the exhaustive budget");
    }
    // Partitioned by c[0][0]; each worker keeps its own minimum.
    std::vector<ClassicalMinimum> parts(static_cast<std::size_t>(n + 1));
    parallel_for(parts.size(), config.workers, [&](std::size_t first) {
      ClassicalMinimum& part = parts[first];
      part.minimum = std::numeric_limits<std::int64_t>::max();
      for_each_composition(n, static_cast<int>(first), [&](const LdsCounts& c) {
        ++part.states_visited;
        const std::int64_t v = bell_value_from_counts(c);
        if (v < part.minimum) {
          part.minimum = v;
          part.argmin = c;
        }
      });
    });
    for (const ClassicalMinimum& part : parts) {
      result.states_visited += part.states_visited;
      if (part.minimum < result.minimum) {
        result.minimum = part.minimum;
        result.argmin = part.argmin;
      }
    }
    return result;
  }

  if (config.samples < 1) throw std::invalid_argument("minimize_classical: samples must be positive");
  constexpr std::int64_t kChunk = 4096;
  const auto chunks = static_cast<std::size_t>((config.samples + kChunk - 1) / kChunk);
  std::vector<ClassicalMinimum> parts(chunks);
  parallel_for(chunks, config.workers, [&](std::size_t chunk) {
    ClassicalMinimum& part = parts[chunk];
    part.minimum = std::numeric_limits<std::int64_t>::max();
    std::mt19937_64 rng(derive_seed(config.seed, chunk));
    const std::int64_t begin = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t end = std::min(config.samples, begin + kChunk);
    for (std::int64_t s = begin; s < end; ++s) {
      LdsCounts c = random_composition(n, rng);
      ++part.states_visited;
      const std::int64_t v = greedy_descent(c, part.states_visited);
      if (v < part.minimum) {
        part.minimum = v;
        part.argmin = c;
      }
    }
  });
  for (const ClassicalMinimum& part : parts) {
    result.states_visited += part.states_visited;
    if (part.minimum < result.minimum) {
      result.minimum = part.minimum;
      result.argmin = part.argmin;
    }
  }
  return result;
}

}  // namespace bellchaos
