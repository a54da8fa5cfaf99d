#include "hcouple/random.hpp"

namespace hcouple {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

unsigned __int128 to_u128(const BigInt& value) {
  BigInt hi = value >> 64;
  BigInt lo = value - (hi << 64);
  unsigned __int128 out = static_cast<unsigned __int128>(hi.get_ui()) << 64;
  // get_ui truncates to unsigned long, which is 64-bit on the supported targets.
  return out | static_cast<unsigned __int128>(lo.get_ui());
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : key_(derive_seed(seed, stream)) {}

std::uint64_t RandomStream::derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed ^ 0x243F6A8885A308D3ULL) + mix64(stream * kGamma + 0x13198A2E03707344ULL));
}

std::uint64_t RandomStream::next_u64() {
  std::uint64_t z = mix64((++counter_) * kGamma ^ key_);
  return mix64(z + key_);
}

unsigned __int128 RandomStream::next_u128() {
  unsigned __int128 hi = next_u64();
  return (hi << 64) | next_u64();
}

std::uint64_t RandomStream::uniform(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Lemire's multiply-and-reject.
  std::uint64_t x = next_u64();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

bool RandomStream::bernoulli(const Rational& q) { return BernoulliThreshold(q).draw(*this); }

BernoulliThreshold::BernoulliThreshold(const Rational& q) {
  if (q <= 0) {
    kind_ = Kind::never;
  } else if (q >= 1) {
    kind_ = Kind::always;
  } else {
    kind_ = Kind::threshold;
    // ceil(q * 2^128) < 2^128 because q < 1.
    BigInt scaled = BigInt(q.get_num()) << 128;
    BigInt t;
    mpz_cdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
    threshold_ = to_u128(t);
  }
}

bool BernoulliThreshold::accepts(unsigned __int128 raw) const {
  switch (kind_) {
    case Kind::never: return false;
    case Kind::always: return true;
    case Kind::threshold: return raw < threshold_;
  }
  return false;
}

bool BernoulliThreshold::draw(RandomStream& rng) const {
  // Always consume a draw so stream positions do not depend on q.
  return accepts(rng.next_u128());
}

}  // namespace hcouple
