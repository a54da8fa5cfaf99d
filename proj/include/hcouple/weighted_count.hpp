#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hcouple/rational.hpp"

namespace hcouple {

/// Exact weighted model counter for monotone "not all of these variables
/// are set" clauses over independent Bernoulli(p) variables (at most 64,
/// one bit each).  A clause whose variables are all set multiplies the
/// weight by violation_factor: 0 for a hard constraint, 1 - c when the
/// clause also carries a private Bernoulli(c) coin that was marginalised.
///
/// Evaluation is Shannon expansion on the most frequent variable with
/// component splitting, memoised on the canonical residual clause list.
/// Internally weights are scaled to integers (p = a/b, factor = f/g) so the
/// recursion never normalises a fraction.
class ClauseWeigher {
 public:
  ClauseWeigher(const Rational& p, const Rational& violation_factor);

  /// Probability-weight of the clause list: sum over assignments of
  /// P(assignment) * factor^(violated clauses).
  Rational weight(std::vector<std::uint64_t> clauses);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& key) const noexcept;
  };

  void canonicalize(std::vector<std::uint64_t>& clauses) const;
  BigInt scaled(const std::vector<std::uint64_t>& clauses);
  BigInt power(std::vector<BigInt>& cache, const BigInt& base, std::size_t exponent);

  BigInt a_, b_, fn_, fd_;
  bool hard_;
  std::vector<BigInt> pow_b_, pow_fd_, pow_fn_;
  std::unordered_map<std::vector<std::uint64_t>, BigInt, KeyHash> memo_;
};

}  // namespace hcouple
