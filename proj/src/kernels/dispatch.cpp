#include <cstdlib>
#include <string_view>

#include "madf/kernels.hpp"

namespace madf::kernels {

bool avx2_supported() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported;
#else
  return false;
#endif
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa active_isa() {
  // MADF_ISA=scalar pins the reference kernels.
  static const Isa isa = [] {
    const char* forced = std::getenv("MADF_ISA");
    if (forced && std::string_view(forced) == "scalar") return Isa::scalar;
    return avx2_supported() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

void inclusive_scan(std::span<std::int64_t> values) {
  if (active_isa() == Isa::avx2)
    avx2::inclusive_scan(values);
  else
    scalar::inclusive_scan(values);
}

std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return active_isa() == Isa::avx2 ? avx2::min_difference(a, b) : scalar::min_difference(a, b);
}

}  // namespace madf::kernels
