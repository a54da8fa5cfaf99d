#include "hcouple/weighted_count.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "hcouple/errors.hpp"

namespace hcouple {

namespace {

std::uint64_t union_of(const std::vector<std::uint64_t>& clauses) {
  std::uint64_t all = 0;
  for (auto c : clauses) all |= c;
  return all;
}

}  // namespace

std::size_t ClauseWeigher::KeyHash::operator()(const std::vector<std::uint64_t>& key) const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ key.size();
  for (auto x : key) {
    h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

ClauseWeigher::ClauseWeigher(const Rational& p, const Rational& violation_factor)
    : a_(p.get_num()), b_(p.get_den()), fn_(violation_factor.get_num()), fd_(violation_factor.get_den()),
      hard_(violation_factor == 0) {
  if (!is_probability(p)) throw Error(ErrorKind::out_of_range, "edge probability outside [0,1]");
  if (!is_probability(violation_factor)) throw Error(ErrorKind::out_of_range, "violation factor outside [0,1]");
}

BigInt ClauseWeigher::power(std::vector<BigInt>& cache, const BigInt& base, std::size_t exponent) {
  if (cache.empty()) cache.emplace_back(1);
  while (cache.size() <= exponent) cache.push_back(cache.back() * base);
  return cache[exponent];
}

void ClauseWeigher::canonicalize(std::vector<std::uint64_t>& clauses) const {
  std::sort(clauses.begin(), clauses.end());
  if (!hard_) return;
  // Hard clauses: duplicates and supersets of another clause are implied.
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  std::vector<std::uint64_t> kept;
  kept.reserve(clauses.size());
  for (auto c : clauses) {
    bool implied = std::any_of(clauses.begin(), clauses.end(),
                               [c](std::uint64_t d) { return d != c && (d & c) == d; });
    if (!implied) kept.push_back(c);
  }
  clauses = std::move(kept);
}

Rational ClauseWeigher::weight(std::vector<std::uint64_t> clauses) {
  std::size_t empties = 0;
  std::erase_if(clauses, [&](std::uint64_t c) {
    empties += c == 0;
    return c == 0;
  });
  Rational constant = 1;
  if (empties > 0) {
    if (hard_) return 0;
    constant = pow(Rational(fn_, fd_), static_cast<unsigned>(empties));
  }
  canonicalize(clauses);
  BigInt w = scaled(clauses);
  BigInt den = power(pow_b_, b_, std::popcount(union_of(clauses))) * power(pow_fd_, fd_, clauses.size());
  Rational out(w, den);
  out.canonicalize();
  return out * constant;
}

BigInt ClauseWeigher::scaled(const std::vector<std::uint64_t>& clauses) {
  if (clauses.empty()) return 1;
  if (auto it = memo_.find(clauses); it != memo_.end()) return it->second;

  // Split into variable-disjoint components.
  std::vector<std::uint64_t> rest = clauses;
  std::vector<std::vector<std::uint64_t>> parts;
  while (!rest.empty()) {
    std::uint64_t vars = rest.front();
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto c : rest) {
        if ((c & vars) && (c | vars) != vars) {
          vars |= c;
          grew = true;
        }
      }
    }
    std::vector<std::uint64_t> part, other;
    for (auto c : rest) ((c & vars) ? part : other).push_back(c);
    parts.push_back(std::move(part));
    rest = std::move(other);
  }

  BigInt result;
  if (parts.size() > 1) {
    result = 1;
    for (const auto& part : parts) result *= scaled(part);
  } else {
    std::array<int, 64> freq{};
    for (auto c : clauses)
      for (std::uint64_t bits = c; bits; bits &= bits - 1) ++freq[std::countr_zero(bits)];
    const int x = static_cast<int>(std::max_element(freq.begin(), freq.end()) - freq.begin());
    const std::uint64_t bit = std::uint64_t{1} << x;
    const std::size_t total_vars = std::popcount(union_of(clauses));
    const std::size_t total_clauses = clauses.size();

    // x set: strip it from every clause; emptied clauses are violated.
    std::vector<std::uint64_t> set_branch;
    std::size_t violated = 0;
    for (auto c : clauses) {
      std::uint64_t reduced = c & ~bit;
      if (reduced == 0) {
        ++violated;
      } else {
        set_branch.push_back(reduced);
      }
    }
    BigInt term_set = 0;
    if (!(hard_ && violated > 0)) {
      canonicalize(set_branch);
      const std::size_t vars1 = std::popcount(union_of(set_branch));
      BigInt sub = scaled(set_branch);
      term_set = a_ * power(pow_fn_, fn_, violated) *
                 power(pow_fd_, fd_, total_clauses - violated - set_branch.size()) *
                 power(pow_b_, b_, total_vars - 1 - vars1) * sub;
    }

    // x clear: every clause containing x is satisfied.
    std::vector<std::uint64_t> clear_branch;
    for (auto c : clauses)
      if (!(c & bit)) clear_branch.push_back(c);
    canonicalize(clear_branch);
    const std::size_t vars0 = std::popcount(union_of(clear_branch));
    BigInt sub_clear = scaled(clear_branch);
    BigInt term_clear = (b_ - a_) * power(pow_fd_, fd_, total_clauses - clear_branch.size()) *
                        power(pow_b_, b_, total_vars - 1 - vars0) * sub_clear;
    result = term_set + term_clear;
  }
  memo_.emplace(clauses, result);
  return result;
}

}  // namespace hcouple
