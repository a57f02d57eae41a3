// Compiled with -mavx2 on x86-64; callers must check avx2_supported().

#include <algorithm>
#include <limits>

#include "madf/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>
#define MADF_HAVE_AVX2 1
#endif

namespace madf::kernels::avx2 {

#ifdef MADF_HAVE_AVX2

void inclusive_scan(std::span<std::int64_t> values) {
  const std::size_t n = values.size();
  std::int64_t* p = values.data();
  const __m256i zero = _mm256_setzero_si256();
  __m256i carry = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    // [a b c d] + [0 a b c]
    __m256i shifted = _mm256_permute4x64_epi64(v, _MM_SHUFFLE(2, 1, 0, 0));
    v = _mm256_add_epi64(v, _mm256_blend_epi32(shifted, zero, 0x03));
    // + [0 0 a a+b]
    shifted = _mm256_permute4x64_epi64(v, _MM_SHUFFLE(1, 0, 0, 0));
    v = _mm256_add_epi64(v, _mm256_blend_epi32(shifted, zero, 0x0F));
    v = _mm256_add_epi64(v, carry);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p + i), v);
    carry = _mm256_permute4x64_epi64(v, _MM_SHUFFLE(3, 3, 3, 3));
  }
  std::int64_t running = i ? p[i - 1] : 0;
  for (; i < n; ++i) {
    running += p[i];
    p[i] = running;
  }
}

std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::size_t i = 0;
  if (n >= 4) {
    __m256i lo = _mm256_set1_epi64x(best);
    for (; i + 4 <= n; i += 4) {
      const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
      const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
      const __m256i d = _mm256_sub_epi64(va, vb);
      lo = _mm256_blendv_epi8(lo, d, _mm256_cmpgt_epi64(lo, d));
    }
    alignas(32) std::int64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), lo);
    best = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  }
  for (; i < n; ++i) best = std::min(best, a[i] - b[i]);
  return best;
}

#else

void inclusive_scan(std::span<std::int64_t> values) { scalar::inclusive_scan(values); }
std::int64_t min_difference(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return scalar::min_difference(a, b);
}

#endif

}  // namespace madf::kernels::avx2
