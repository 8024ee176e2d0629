#ifndef DYADLAB_POWER_PRODUCT_HPP
#define DYADLAB_POWER_PRODUCT_HPP

#include "dyadlab/scalar.hpp"

#include <utility>
#include <vector>

namespace dyadlab {

/// A nonnegative real held exactly as prod_j base_j^{e_j} with rational bases
/// and rational exponents. Two such values are compared exactly by raising
/// both to a common denominator D of all exponents, where they are rational.
class PowerProduct {
 public:
  PowerProduct() = default;
  explicit PowerProduct(const Rational& base, const Rational& exponent = Rational(1)) { multiply(base, exponent); }

  PowerProduct& multiply(const Rational& base, const Rational& exponent = Rational(1));

  bool is_zero() const noexcept { return zero_; }
  /// lcm of the exponent denominators.
  Integer common_denominator() const;
  /// value^d; d must be a multiple of common_denominator().
  Rational raised(const Integer& d) const;
  double to_double() const;

  const std::vector<std::pair<Rational, Rational>>& factors() const noexcept { return factors_; }

  friend int compare(const PowerProduct& a, const PowerProduct& b);
  friend bool operator<(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) < 0; }
  friend bool operator==(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) == 0; }

 private:
  std::vector<std::pair<Rational, Rational>> factors_;
  bool zero_ = false;
};

Integer lcm(const Integer& a, const Integer& b);

}  // namespace dyadlab

#endif  // DYADLAB_POWER_PRODUCT_HPP
