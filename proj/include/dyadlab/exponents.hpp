#ifndef DYADLAB_EXPONENTS_HPP
#define DYADLAB_EXPONENTS_HPP

#include "dyadlab/scalar.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace dyadlab {

/// Exponents p_i = scale * base^i for every index i >= start.
struct GeometricTail {
  Rational scale{1};
  Rational base{2};
  std::size_t start = 1;

  friend bool operator==(const GeometricTail&, const GeometricTail&) = default;
};

/// A sequence of exponents p_1, p_2, ... each > 1: a finite head followed by
/// an optional closed-form geometric tail. With no tail the sequence is
/// finite and sum 1/p_i is stored exactly; with a tail the sum is still an
/// exact rational through the geometric closed form.
class ExponentSequence {
 public:
  ExponentSequence() = default;
  explicit ExponentSequence(std::vector<Rational> head, std::optional<GeometricTail> tail = std::nullopt);

  std::size_t head_size() const noexcept { return head_.size(); }
  const std::vector<Rational>& head() const noexcept { return head_; }
  const std::optional<GeometricTail>& tail() const noexcept { return tail_; }
  bool has_tail() const noexcept { return tail_.has_value(); }

  /// p_i for 1-based i. Indices past the head require a tail.
  Rational exponent_exact(std::size_t i) const;
  double exponent(std::size_t i) const;
  /// p'_i = p_i / (p_i - 1).
  double conjugate(std::size_t i) const;

  /// sum_i 1/p_i, exactly.
  const Rational& inverse_p() const noexcept { return inverse_p_; }
  double p() const noexcept { return p_; }
  Rational p_exact() const { return Rational(1) / inverse_p_; }

  /// sum_{i > N} 1/p_i (zero without a tail), exactly.
  const Rational& tail_inverse_sum() const noexcept { return tail_inverse_sum_; }

  /// sum_{i > m} 1/p_i for m >= N, from the closed form.
  double remainder_after(std::size_t m) const;

  friend bool operator==(const ExponentSequence& a, const ExponentSequence& b) {
    return a.head_ == b.head_ && a.tail_ == b.tail_;
  }

 private:
  std::vector<Rational> head_;
  std::optional<GeometricTail> tail_;
  Rational inverse_p_{0};
  Rational tail_inverse_sum_{0};
  double p_ = 0.0;
};

enum class SeriesStatus { finite, plus_infinity, minus_infinity, undefined };

const char* to_string(SeriesStatus status) noexcept;

/// An extended-real series value; `undefined` exactly when both the positive
/// and the negative parts diverge.
struct SeriesClassification {
  double value = 0.0;
  SeriesStatus status = SeriesStatus::finite;
};

struct HarmonicSum {
  double p = 0.0;
  double tail_bound = 0.0;
};

struct ProductEstimate {
  double value = 0.0;
  double remainder_bound = 0.0;
  std::size_t terms = 0;
};

struct RegularityConstants {
  SeriesClassification log_sum;
  /// prod_i p_i^{p'_i / p_i} p'_i, per-index reading.
  ProductEstimate grafakos_product;
};

inline constexpr double kDefaultTolerance = 1e-12;

/// p with |sum 1/p_i - 1/p| <= tail_bound. The bound is the geometric
/// remainder past the first index where it drops below `tol` (0 without a tail).
HarmonicSum harmonic_sum(const ExponentSequence& seq, double tol = kDefaultTolerance);

/// prod_i p'_i by partial products, with a rigorous remainder from
/// log p'_i <= 1/(p_i - 1). Throws std::runtime_error when `tol` is unreachable.
ProductEstimate conjugate_product(const ExponentSequence& seq, double tol = kDefaultTolerance);

RegularityConstants regularity_constants(const ExponentSequence& seq, double tol = kDefaultTolerance);

/// Real sequence on N: explicit head, then coefficient * i^power * ratio^i.
struct ClosedFormSequence {
  std::vector<double> head;
  double coefficient = 0.0;
  int power = 0;
  double ratio = 0.0;

  double term(std::size_t i) const;
};

/// sum_i lambda_i b_i as the integral of b against the probability measure
/// lambda on N, classified by which of the positive/negative parts diverge.
/// Throws std::invalid_argument unless lambda_i in (0,1) and sum lambda_i = 1.
SeriesClassification weighted_series_sum(const ClosedFormSequence& lambda, const ClosedFormSequence& b);

}  // namespace dyadlab

#endif  // DYADLAB_EXPONENTS_HPP
