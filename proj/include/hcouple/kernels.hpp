#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// Data-parallel inner loop of the brute-force conditional oracle: sweep all
// 2^V assignments of V boolean edge variables and histogram them by
// (target fully present, number of ones, number of fully present clauses).
// The scalar kernel is the reference; vector kernels must agree exactly.

namespace hcouple::kernels {

enum class Isa { scalar, avx2, neon };

const char* to_string(Isa isa);

inline constexpr int kMaxHistogramVars = 30;
inline constexpr int kMaxHistogramClauses = 255;

struct AssignmentHistogram {
  int var_count = 0;
  int clause_count = 0;
  std::vector<std::uint64_t> counts;

  std::size_t index(int target_hit, int ones, int violations) const {
    return (static_cast<std::size_t>(target_hit) * (var_count + 1) + ones) * (clause_count + 1) +
           violations;
  }
  std::uint64_t at(int target_hit, int ones, int violations) const {
    return counts[index(target_hit, ones, violations)];
  }
  friend bool operator==(const AssignmentHistogram&, const AssignmentHistogram&) = default;
};

bool isa_supported(Isa isa);

/// Best kernel for this CPU, unless overridden by force_isa.
Isa active_isa();

/// Pins dispatch to one kernel (tests); nullopt restores auto-detection.
void force_isa(std::optional<Isa> isa);

AssignmentHistogram assignment_histogram(int var_count, std::span<const std::uint32_t> clauses,
                                         std::uint32_t target);

AssignmentHistogram assignment_histogram(Isa isa, int var_count, std::span<const std::uint32_t> clauses,
                                         std::uint32_t target);

namespace detail {

using HistogramKernel = void (*)(int var_count, const std::uint32_t* clauses, int clause_count,
                                 std::uint32_t target, std::uint64_t* counts);

void histogram_scalar(int var_count, const std::uint32_t* clauses, int clause_count, std::uint32_t target,
                      std::uint64_t* counts);
void histogram_avx2(int var_count, const std::uint32_t* clauses, int clause_count, std::uint32_t target,
                    std::uint64_t* counts);
void histogram_neon(int var_count, const std::uint32_t* clauses, int clause_count, std::uint32_t target,
                    std::uint64_t* counts);

}  // namespace detail

}  // namespace hcouple::kernels
