#include <algorithm>
#include <limits>

#include "madf/kernels.hpp"

namespace madf::kernels::scalar {

void inclusive_scan(std::span<std::int64_t> values) {
  std::int64_t running = 0;
  for (auto& v : values) {
    running += v;
    v = running;
  }
}

std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, a[i] - b[i]);
  return best;
}

}  // namespace madf::kernels::scalar
