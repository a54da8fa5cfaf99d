#include <bit>

#include "hcouple/kernels.hpp"

namespace hcouple::kernels::detail {

void histogram_scalar(int var_count, const std::uint32_t* clauses, int clause_count, std::uint32_t target,
                      std::uint64_t* counts) {
  const std::uint32_t total = std::uint32_t{1} << var_count;
  const std::size_t stride_ones = static_cast<std::size_t>(clause_count) + 1;
  const std::size_t stride_target = stride_ones * (static_cast<std::size_t>(var_count) + 1);
  for (std::uint32_t x = 0; x < total; ++x) {
    int violations = 0;
    for (int c = 0; c < clause_count; ++c) violations += (x & clauses[c]) == clauses[c];
    const int hit = (x & target) == target;
    counts[hit * stride_target + std::popcount(x) * stride_ones + violations] += 1;
  }
}

}  // namespace hcouple::kernels::detail
