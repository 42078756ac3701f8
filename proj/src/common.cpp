#include "bellchaos/common.hpp"

#include <cstdlib>
#include <string>

namespace bellchaos {

std::size_t matrix_budget_mb() {
  if (const char* env = std::getenv("BELLCHAOS_BUDGET_MB")) {
    try {
      long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 2048;
}

void check_dense_budget(std::size_t dim, const std::string& what) {
  const double bytes = static_cast<double>(dim) * static_cast<double>(dim) * sizeof(cdouble);
  const double budget = static_cast<double>(matrix_budget_mb()) * 1024.0 * 1024.0;
  if (bytes > budget) {
    throw BudgetExceeded(what + ": dense matrix of dimension " + std::to_string(dim) +
                         " exceeds the " + std::to_string(matrix_budget_mb()) + " MB budget");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace bellchaos
