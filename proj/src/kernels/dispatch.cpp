#include <atomic>
#include <string>

#include "hcouple/errors.hpp"
#include "hcouple/kernels.hpp"

namespace hcouple::kernels {

namespace {

// -1 = auto-detect, otherwise the forced Isa value.
std::atomic<int> g_forced{-1};

Isa detect() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#elif defined(__aarch64__)
  return Isa::neon;
#endif
  return Isa::scalar;
}

detail::HistogramKernel kernel_for(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    case Isa::avx2: return &detail::histogram_avx2;
#endif
#if defined(__aarch64__)
    case Isa::neon: return &detail::histogram_neon;
#endif
    default: return &detail::histogram_scalar;
  }
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect();
  return detected;
}

void force_isa(std::optional<Isa> isa) {
  if (isa && !isa_supported(*isa)) {
    throw Error(ErrorKind::config, std::string("kernel ") + to_string(*isa) + " not supported on this CPU");
  }
  g_forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

AssignmentHistogram assignment_histogram(Isa isa, int var_count, std::span<const std::uint32_t> clauses,
                                         std::uint32_t target) {
  if (var_count < 0 || var_count > kMaxHistogramVars) {
    throw Error(ErrorKind::cap_exceeded, "histogram kernel supports at most " +
                                             std::to_string(kMaxHistogramVars) + " variables");
  }
  if (clauses.size() > static_cast<std::size_t>(kMaxHistogramClauses)) {
    throw Error(ErrorKind::cap_exceeded, "histogram kernel supports at most " +
                                             std::to_string(kMaxHistogramClauses) + " clauses");
  }
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::config, std::string("kernel ") + to_string(isa) + " not supported on this CPU");
  }
  AssignmentHistogram h;
  h.var_count = var_count;
  h.clause_count = static_cast<int>(clauses.size());
  h.counts.assign(2 * static_cast<std::size_t>(var_count + 1) * (clauses.size() + 1), 0);
  kernel_for(isa)(var_count, clauses.data(), h.clause_count, target, h.counts.data());
  return h;
}

AssignmentHistogram assignment_histogram(int var_count, std::span<const std::uint32_t> clauses,
                                         std::uint32_t target) {
  return assignment_histogram(active_isa(), var_count, clauses, target);
}

}  // namespace hcouple::kernels
