#include "hcouple/rational.hpp"

#include <cctype>
#include <cmath>

#include "hcouple/errors.hpp"

namespace hcouple {

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::parse, "empty integer literal");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw Error(ErrorKind::parse, "bad integer literal");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(ErrorKind::parse, "bad integer literal '" + std::string(text) + "'");
    }
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return BigInt(digits, 10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorKind::parse, "empty rational literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(text.substr(0, slash)));
    BigInt den = parse_integer(trim(text.substr(slash + 1)));
    if (den == 0) throw Error(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch == 'e' || ch == 'E') {
      BigInt e = parse_integer(text.substr(i + 1));
      if (!e.fits_slong_p()) throw Error(ErrorKind::parse, "exponent out of range");
      exponent += e.get_si();
      i = text.size();
      break;
    } else {
      throw Error(ErrorKind::parse, "bad rational literal '" + std::string(text) + "'");
    }
  }
  if (!any_digit) throw Error(ErrorKind::parse, "bad rational literal '" + std::string(text) + "'");

  BigInt mantissa(digits, 10);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

Rational limit_denominator(double x, std::uint64_t max_denominator) {
  if (!std::isfinite(x)) throw Error(ErrorKind::out_of_range, "non-finite value");
  if (max_denominator < 1) throw Error(ErrorKind::config, "max_denominator must be >= 1");
  Rational exact(x);
  BigInt limit(static_cast<unsigned long>(max_denominator));
  if (exact.get_den() <= limit) return exact;

  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  BigInt n = exact.get_num(), d = exact.get_den();
  while (true) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    BigInt q2 = q0 + a * q1;
    if (q2 > limit) break;
    BigInt p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    BigInt rem = n - a * d;
    n = d;
    d = rem;
    if (d == 0) break;
  }
  BigInt k = (limit - q0) / q1;
  Rational bound1(p0 + k * p1, q0 + k * q1);
  Rational bound2(p1, q1);
  bound1.canonicalize();
  bound2.canonicalize();
  return abs(bound2 - exact) <= abs(bound1 - exact) ? bound2 : bound1;
}

double to_double(const Rational& q) { return q.get_d(); }

bool is_probability(const Rational& q) { return q >= 0 && q <= 1; }

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_pattern: return "invalid-pattern";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::divisibility: return "divisibility";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::contract_violation: return "contract-violation";
    case ErrorKind::zero_probability_condition: return "zero-probability-condition";
    case ErrorKind::component_too_large: return "component-too-large";
    case ErrorKind::invalid_constants: return "invalid-constants";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::config: return "config";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

bool is_budget_error(ErrorKind kind) {
  return kind == ErrorKind::cap_exceeded || kind == ErrorKind::budget_exceeded ||
         kind == ErrorKind::component_too_large;
}

}  // namespace hcouple
