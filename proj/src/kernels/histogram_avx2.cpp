#include <immintrin.h>

#include <bit>

#include "hcouple/kernels.hpp"

namespace hcouple::kernels::detail {

// Eight assignments per iteration in 32-bit lanes; the clause loop is the
// vectorised part, histogram scatter stays scalar.
void histogram_avx2(int var_count, const std::uint32_t* clauses, int clause_count, std::uint32_t target,
                    std::uint64_t* counts) {
  if (var_count < 3) {
    histogram_scalar(var_count, clauses, clause_count, target, counts);
    return;
  }
  const std::uint32_t total = std::uint32_t{1} << var_count;
  const std::size_t stride_ones = static_cast<std::size_t>(clause_count) + 1;
  const std::size_t stride_target = stride_ones * (static_cast<std::size_t>(var_count) + 1);

  const __m256i lane_offsets = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i target_v = _mm256_set1_epi32(static_cast<int>(target));
  alignas(32) std::uint32_t viol_out[8];
  alignas(32) std::uint32_t hit_out[8];

  for (std::uint32_t base = 0; base < total; base += 8) {
    const __m256i x = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(base)), lane_offsets);
    __m256i viol = _mm256_setzero_si256();
    for (int c = 0; c < clause_count; ++c) {
      const __m256i cv = _mm256_set1_epi32(static_cast<int>(clauses[c]));
      const __m256i full = _mm256_cmpeq_epi32(_mm256_and_si256(x, cv), cv);
      viol = _mm256_sub_epi32(viol, full);
    }
    const __m256i hit = _mm256_cmpeq_epi32(_mm256_and_si256(x, target_v), target_v);
    _mm256_store_si256(reinterpret_cast<__m256i*>(viol_out), viol);
    _mm256_store_si256(reinterpret_cast<__m256i*>(hit_out), hit);
    for (int lane = 0; lane < 8; ++lane) {
      const std::uint32_t a = base + static_cast<std::uint32_t>(lane);
      const std::size_t t = hit_out[lane] ? 1 : 0;
      counts[t * stride_target + std::popcount(a) * stride_ones + viol_out[lane]] += 1;
    }
  }
}

}  // namespace hcouple::kernels::detail
