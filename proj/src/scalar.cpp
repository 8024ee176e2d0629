#include "dyadlab/scalar.hpp"

#include <gmp.h>

#include <charconv>
#include <stdexcept>

namespace dyadlab {

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  return Integer(std::string(digits));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Integer n-th root when exact.
std::optional<Integer> exact_root(const Integer& x, unsigned long n) {
  Integer r;
  if (mpz_root(r.backend().data(), x.backend().data(), n) == 0) return std::nullopt;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(text.substr(0, slash)), whole);
    Integer den = parse_integer(trim(text.substr(slash + 1)), whole);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else {
    std::int64_t exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = text.substr(e + 1);
      if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
      if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
        throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
      }
      text = text.substr(0, e);
    }
    std::string digits;
    std::int64_t scale = 0;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
      scale = static_cast<std::int64_t>(text.size() - dot - 1);
      if (digits.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    } else {
      digits = std::string(text);
    }
    value = Rational(parse_integer(digits, whole));
    value *= pow_int(Rational(10), exponent - scale);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.str(); }

Rational pow_int(const Rational& q, std::int64_t e) {
  if (e < 0) {
    if (q == 0) throw std::domain_error("zero raised to a negative power");
    return pow_int(Rational(1) / q, -e);
  }
  Integer num = boost::multiprecision::pow(boost::multiprecision::numerator(q), static_cast<unsigned>(e));
  Integer den = boost::multiprecision::pow(boost::multiprecision::denominator(q), static_cast<unsigned>(e));
  return Rational(num, den);
}

std::optional<Rational> exact_power(const Rational& x, const Rational& e) {
  if (x < 0) throw std::domain_error("exact_power of a negative base");
  if (x == 0) {
    if (e > 0) return Rational(0);
    throw std::domain_error("zero raised to a non-positive power");
  }
  const Integer a = boost::multiprecision::numerator(e);
  const Integer b = boost::multiprecision::denominator(e);
  if (b > 1'000'000 || boost::multiprecision::abs(a) > 1'000'000) return std::nullopt;
  auto num = exact_root(boost::multiprecision::numerator(x), b.convert_to<unsigned long>());
  auto den = exact_root(boost::multiprecision::denominator(x), b.convert_to<unsigned long>());
  if (!num || !den) return std::nullopt;
  return pow_int(Rational(*num, *den), a.convert_to<std::int64_t>());
}

}  // namespace dyadlab
