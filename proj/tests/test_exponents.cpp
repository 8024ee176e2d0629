#include "dyadlab/exponents.hpp"

#include <doctest.h>

#include <cmath>

using namespace dyadlab;

namespace {

ExponentSequence powers_of_two() { return ExponentSequence({}, GeometricTail{1, 2, 1}); }

ExponentSequence fours_then_powers() { return ExponentSequence({4, 4}, GeometricTail{1, 2, 3}); }

// prod_{i<=m} p'_i by brute force.
double conjugate_partial(const ExponentSequence& seq, std::size_t m) {
  double prod = 1.0;
  for (std::size_t i = 1; i <= m; ++i) prod *= seq.conjugate(i);
  return prod;
}

}  // namespace

TEST_CASE("harmonic sum of finite and geometric sequences") {
  const ExponentSequence two_two({2, 2});
  CHECK(two_two.p_exact() == 1);
  CHECK(harmonic_sum(two_two).tail_bound == 0.0);

  CHECK(powers_of_two().p_exact() == 1);
  CHECK(fours_then_powers().p_exact() == Rational(4, 3));
  CHECK(fours_then_powers().tail_inverse_sum() == Rational(1, 4));
  CHECK(harmonic_sum(fours_then_powers()).p == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("harmonic tail bound against brute-force partial sums") {
  for (const ExponentSequence& seq :
       {powers_of_two(), fours_then_powers(), ExponentSequence({Rational(3, 2)}, GeometricTail{Rational(5, 2), 3, 2})}) {
    const double target = to_double(seq.inverse_p());
    const HarmonicSum h = harmonic_sum(seq);
    double partial = 0.0;
    for (std::size_t i = 1; i <= 10000; ++i) {
      partial += 1.0 / seq.exponent(i);
      if (i >= seq.head_size()) {
        // Exact remainder closes the gap; partial sums never overshoot.
        CHECK(partial <= target * (1 + 1e-15));
        CHECK(std::abs(partial + seq.remainder_after(i) - target) <= 1e-15 * target);
      }
    }
    CHECK(std::abs(partial - target) <= h.tail_bound + 1e-15);
  }
}

TEST_CASE("exponents must exceed 1") {
  CHECK_THROWS_WITH_AS(ExponentSequence({1, 2}), doctest::Contains("exponent must exceed 1"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ExponentSequence({Rational(1, 2)}), doctest::Contains("exponent must exceed 1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(ExponentSequence({}, GeometricTail{Rational(1, 4), 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ExponentSequence({2}, GeometricTail{1, 2, 5}), std::invalid_argument);
  CHECK_THROWS_AS(ExponentSequence(std::vector<Rational>{}), std::invalid_argument);
}

TEST_CASE("conjugate product") {
  CHECK(conjugate_product(ExponentSequence({2, 2})).value == doctest::Approx(4.0).epsilon(1e-15));

  const ProductEstimate pw = conjugate_product(powers_of_two());
  CHECK(std::abs(pw.value - 3.462746619455061) <= 1e-9);
  CHECK(std::abs(pw.value - conjugate_partial(powers_of_two(), 2000)) <= 1e-6);
  CHECK(pw.remainder_bound <= 1e-12);

  // (4/3)^2 prod_{i>=3} (1 - 2^-i)^-1.
  const ProductEstimate mixed = conjugate_product(fours_then_powers());
  CHECK(std::abs(mixed.value - 2.308497746303375) <= 1e-9);
  CHECK(std::abs(mixed.value - conjugate_partial(fours_then_powers(), 2000)) <= 1e-6);
}

TEST_CASE("regularity constants") {
  const RegularityConstants finite = regularity_constants(ExponentSequence({2, 2}));
  CHECK(finite.log_sum.status == SeriesStatus::finite);
  CHECK(finite.log_sum.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(finite.grafakos_product.value == doctest::Approx(16.0).epsilon(1e-14));

  const RegularityConstants geo = regularity_constants(powers_of_two());
  CHECK(geo.log_sum.status == SeriesStatus::finite);
  CHECK(geo.log_sum.value == doctest::Approx(1.3862943611198906).epsilon(1e-12));
  CHECK(std::isfinite(geo.grafakos_product.value));

  // Per-index product prod_i p_i^{p'_i/p_i} p'_i by brute force.
  double brute = 1.0;
  const ExponentSequence seq = powers_of_two();
  for (std::size_t i = 1; i <= 200; ++i) {
    const double pi = seq.exponent(i);
    const double ci = seq.conjugate(i);
    brute *= std::pow(pi, ci / pi) * ci;
  }
  CHECK(geo.grafakos_product.value == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("weighted series classification") {
  const ClosedFormSequence halves{{}, 1.0, 0, 0.5};
  const SeriesClassification ones = weighted_series_sum(halves, {{}, 1.0, 0, 1.0});
  CHECK(ones.status == SeriesStatus::finite);
  CHECK(ones.value == doctest::Approx(1.0).epsilon(1e-14));

  const SeriesClassification linear = weighted_series_sum(halves, {{}, 1.0, 1, 1.0});
  CHECK(linear.status == SeriesStatus::finite);
  CHECK(linear.value == doctest::Approx(2.0).epsilon(1e-13));

  CHECK(weighted_series_sum(halves, {{}, 1.0, 0, -2.0}).status == SeriesStatus::undefined);
  CHECK(weighted_series_sum(halves, {{}, 1.0, 0, 4.0}).status == SeriesStatus::plus_infinity);
  CHECK(weighted_series_sum(halves, {{}, -1.0, 0, 4.0}).status == SeriesStatus::minus_infinity);
  CHECK_THROWS_AS(weighted_series_sum({{}, 1.0, 0, 0.25}, {{}, 1.0, 0, 1.0}), std::invalid_argument);
}
