#pragma once

#include <cstdint>
#include <vector>

#include "hcouple/rational.hpp"

namespace hcouple {

/// Counter-based stream: output k is a keyed mix of (seed, stream, k), so
/// streams for different trials never overlap and never run out.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  unsigned __int128 next_u128();

  /// Uniform integer in [0, bound).
  std::uint64_t uniform(std::uint64_t bound);

  /// Exact Bernoulli(q): compares a 128-bit uniform draw against q * 2^128.
  bool bernoulli(const Rational& q);

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

  /// Seed value recorded in trial records for stream(seed, index).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Precomputed threshold for repeated draws at one fixed probability.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(const Rational& q);

  bool draw(RandomStream& rng) const;

  /// True iff a draw with the given raw value succeeds.  Two thresholds fed
  /// the same raw value are monotone in q.
  bool accepts(unsigned __int128 raw) const;

 private:
  enum class Kind { never, always, threshold } kind_;
  unsigned __int128 threshold_ = 0;
};

template <typename T>
void shuffle(std::vector<T>& items, RandomStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = rng.uniform(i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace hcouple
