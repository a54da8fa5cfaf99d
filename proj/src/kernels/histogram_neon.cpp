#include <arm_neon.h>

#include <bit>

#include "hcouple/kernels.hpp"

namespace hcouple::kernels::detail {

void histogram_neon(int var_count, const std::uint32_t* clauses, int clause_count, std::uint32_t target,
                    std::uint64_t* counts) {
  if (var_count < 2) {
    histogram_scalar(var_count, clauses, clause_count, target, counts);
    return;
  }
  const std::uint32_t total = std::uint32_t{1} << var_count;
  const std::size_t stride_ones = static_cast<std::size_t>(clause_count) + 1;
  const std::size_t stride_target = stride_ones * (static_cast<std::size_t>(var_count) + 1);

  const std::uint32_t offsets_raw[4] = {0, 1, 2, 3};
  const uint32x4_t lane_offsets = vld1q_u32(offsets_raw);
  const uint32x4_t target_v = vdupq_n_u32(target);
  std::uint32_t viol_out[4];
  std::uint32_t hit_out[4];

  for (std::uint32_t base = 0; base < total; base += 4) {
    const uint32x4_t x = vaddq_u32(vdupq_n_u32(base), lane_offsets);
    uint32x4_t viol = vdupq_n_u32(0);
    for (int c = 0; c < clause_count; ++c) {
      const uint32x4_t cv = vdupq_n_u32(clauses[c]);
      viol = vsubq_u32(viol, vceqq_u32(vandq_u32(x, cv), cv));
    }
    const uint32x4_t hit = vceqq_u32(vandq_u32(x, target_v), target_v);
    vst1q_u32(viol_out, viol);
    vst1q_u32(hit_out, hit);
    for (int lane = 0; lane < 4; ++lane) {
      const std::uint32_t a = base + static_cast<std::uint32_t>(lane);
      const std::size_t t = hit_out[lane] ? 1 : 0;
      counts[t * stride_target + std::popcount(a) * stride_ones + viol_out[lane]] += 1;
    }
  }
}

}  // namespace hcouple::kernels::detail
