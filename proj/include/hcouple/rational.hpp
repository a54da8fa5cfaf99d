#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace hcouple {

/// Exact rational used for every probability inside the engine.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "3/8", "0.85", "1e-3" style literals exactly.  Decimal and
/// scientific forms are interpreted as the exact decimal value.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);

/// Closest rational to x with denominator at most max_denominator
/// (continued-fraction best approximation).
Rational limit_denominator(double x, std::uint64_t max_denominator);

double to_double(const Rational& q);

bool is_probability(const Rational& q);

}  // namespace hcouple
