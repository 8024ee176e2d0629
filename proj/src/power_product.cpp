#include "dyadlab/power_product.hpp"

#include <cmath>
#include <stdexcept>

namespace dyadlab {

Integer lcm(const Integer& a, const Integer& b) { return boost::multiprecision::lcm(a, b); }

PowerProduct& PowerProduct::multiply(const Rational& base, const Rational& exponent) {
  if (base < 0) throw std::domain_error("power product base must be nonnegative");
  if (exponent == 0) return *this;
  if (base == 0) {
    if (exponent < 0) throw std::domain_error("zero raised to a negative power");
    zero_ = true;
    return *this;
  }
  factors_.emplace_back(base, exponent);
  return *this;
}

Integer PowerProduct::common_denominator() const {
  Integer d = 1;
  for (const auto& [base, e] : factors_) d = lcm(d, boost::multiprecision::denominator(e));
  return d;
}

Rational PowerProduct::raised(const Integer& d) const {
  if (zero_) return Rational(0);
  Rational out(1);
  for (const auto& [base, e] : factors_) {
    const Rational scaled = e * Rational(d);
    if (boost::multiprecision::denominator(scaled) != 1) {
      throw std::invalid_argument("power product raised to a non-multiple of its common denominator");
    }
    out *= pow_int(base, boost::multiprecision::numerator(scaled).convert_to<std::int64_t>());
  }
  return out;
}

double PowerProduct::to_double() const {
  if (zero_) return 0.0;
  double log_value = 0.0;
  for (const auto& [base, e] : factors_) {
    // log of a rational without overflowing the double range.
    const Integer& num = boost::multiprecision::numerator(base);
    const Integer& den = boost::multiprecision::denominator(base);
    long num_exp = 0, den_exp = 0;
    const double num_m = mpz_get_d_2exp(&num_exp, num.backend().data());
    const double den_m = mpz_get_d_2exp(&den_exp, den.backend().data());
    const double log_base = std::log(num_m / den_m) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
    log_value += dyadlab::to_double(e) * log_base;
  }
  return std::exp(log_value);
}

int compare(const PowerProduct& a, const PowerProduct& b) {
  const Integer d = lcm(a.common_denominator(), b.common_denominator());
  const Rational x = a.raised(d), y = b.raised(d);
  return x < y ? -1 : (y < x ? 1 : 0);
}

}  // namespace dyadlab
