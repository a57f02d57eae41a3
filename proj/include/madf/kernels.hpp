#pragma once

// Integer kernels behind the start-time scan. Each kernel has a scalar
// reference and an AVX2 variant; the dispatching entry points pick the
// widest variant the running CPU supports.

#include <cstdint>
#include <span>

namespace madf::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
/// Variant chosen by the dispatchers on this machine.
Isa active_isa();
bool avx2_supported();

/// In-place inclusive prefix sum.
void inclusive_scan(std::span<std::int64_t> values);
/// min_i (a[i] - b[i]) over the common length; INT64_MAX when empty.
std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

namespace scalar {
void inclusive_scan(std::span<std::int64_t> values);
std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
}  // namespace scalar

namespace avx2 {
// Only call when avx2_supported().
void inclusive_scan(std::span<std::int64_t> values);
std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
}  // namespace avx2

}  // namespace madf::kernels
