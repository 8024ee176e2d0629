#ifndef DYADLAB_SCALAR_HPP
#define DYADLAB_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

namespace dyadlab {

/// Exact rational scalar. Expression templates are off so that Eigen sees a
/// plain value type.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

template <typename Scalar>
Vec<double> to_double(const Vec<Scalar>& v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return v;
  } else {
    Vec<double> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
  }
}

/// Exact conversion of a binary double.
inline Rational to_rational(double x) { return Rational(x); }

/// Parses "3", "-2", "3/2", "1.5", "2.5e-3" into an exact rational.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// q^e for integer e (negative e inverts; 0^negative throws).
Rational pow_int(const Rational& q, std::int64_t e);
inline double pow_int(double x, std::int64_t e) {
  double r = 1.0, b = e < 0 ? 1.0 / x : x;
  for (std::uint64_t k = e < 0 ? -static_cast<std::uint64_t>(e) : e; k; k >>= 1) {
    if (k & 1U) r *= b;
    b *= b;
  }
  return r;
}

/// 2^{-bits} in the requested scalar type; exact for both.
template <typename Scalar>
Scalar dyadic_measure(int bits) {
  if constexpr (is_exact_v<Scalar>) {
    return Rational(Integer(1), Integer(1) << bits);
  } else {
    return std::ldexp(1.0, -bits);
  }
}

/// x^e with rational e when the result is rational; nullopt otherwise.
/// x must be positive (or zero with e > 0).
std::optional<Rational> exact_power(const Rational& x, const Rational& e);

}  // namespace dyadlab

#endif  // DYADLAB_SCALAR_HPP
