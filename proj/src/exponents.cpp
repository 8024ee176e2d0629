#include "dyadlab/exponents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dyadlab {

namespace {

constexpr std::size_t kMaxProductTerms = 1'000'000;

// sum_{i >= s} x^i and sum_{i >= s} i x^i for 0 < x < 1.
double geometric_sum(double x, std::size_t s) { return std::pow(x, static_cast<double>(s)) / (1.0 - x); }

double geometric_moment(double x, std::size_t s) {
  const double sd = static_cast<double>(s);
  return std::pow(x, sd) * (sd - (sd - 1.0) * x) / ((1.0 - x) * (1.0 - x));
}

// sum_{i >= s} ln(p_i) / p_i for p_i = c r^i.
double tail_log_sum(const GeometricTail& tail, std::size_t s) {
  const double c = to_double(tail.scale);
  const double r = to_double(tail.base);
  const double x = 1.0 / r;
  return (std::log(c) * geometric_sum(x, s) + std::log(r) * geometric_moment(x, s)) / c;
}

}  // namespace

ExponentSequence::ExponentSequence(std::vector<Rational> head, std::optional<GeometricTail> tail)
    : head_(std::move(head)), tail_(std::move(tail)) {
  for (const Rational& pi : head_) {
    if (pi <= 1) throw std::invalid_argument("exponent must exceed 1 (got " + to_string(pi) + ")");
    inverse_p_ += Rational(1) / pi;
  }
  if (tail_) {
    const GeometricTail& t = *tail_;
    if (t.base <= 1) throw std::invalid_argument("geometric tail base must exceed 1");
    if (t.scale <= 0) throw std::invalid_argument("geometric tail scale must be positive");
    if (t.start != head_.size() + 1) {
      throw std::invalid_argument("geometric tail must start right after the head (index " +
                                  std::to_string(head_.size() + 1) + ")");
    }
    if (t.scale * pow_int(t.base, static_cast<std::int64_t>(t.start)) <= 1) {
      throw std::invalid_argument("exponent must exceed 1 (first tail exponent is too small)");
    }
    // sum_{i >= s} 1/(c r^i) = r^{-s} / (c (1 - 1/r)).
    const Rational x = Rational(1) / t.base;
    tail_inverse_sum_ = pow_int(x, static_cast<std::int64_t>(t.start)) / (t.scale * (Rational(1) - x));
    inverse_p_ += tail_inverse_sum_;
  }
  if (inverse_p_ == 0) throw std::invalid_argument("exponent sequence is empty");
  p_ = to_double(Rational(1) / inverse_p_);
}

Rational ExponentSequence::exponent_exact(std::size_t i) const {
  if (i == 0) throw std::out_of_range("exponent indices are 1-based");
  if (i <= head_.size()) return head_[i - 1];
  if (!tail_) throw std::out_of_range("exponent index past a finite sequence");
  return tail_->scale * pow_int(tail_->base, static_cast<std::int64_t>(i));
}

double ExponentSequence::exponent(std::size_t i) const {
  if (i >= 1 && i <= head_.size()) return to_double(head_[i - 1]);
  if (i > head_.size() && tail_) {
    return to_double(tail_->scale) * std::pow(to_double(tail_->base), static_cast<double>(i));
  }
  return to_double(exponent_exact(i));
}

double ExponentSequence::conjugate(std::size_t i) const {
  const double pi = exponent(i);
  // p/(p-1) = 1 + 1/(p-1); the second form keeps precision for large p.
  return 1.0 + 1.0 / (pi - 1.0);
}

double ExponentSequence::remainder_after(std::size_t m) const {
  if (!tail_) return 0.0;
  if (m < head_.size()) throw std::out_of_range("remainder_after expects m >= head size");
  const double x = 1.0 / to_double(tail_->base);
  return geometric_sum(x, m + 1) / to_double(tail_->scale);
}

const char* to_string(SeriesStatus status) noexcept {
  switch (status) {
    case SeriesStatus::finite: return "finite";
    case SeriesStatus::plus_infinity: return "plus_infinity";
    case SeriesStatus::minus_infinity: return "minus_infinity";
    case SeriesStatus::undefined: return "undefined";
  }
  return "undefined";
}

HarmonicSum harmonic_sum(const ExponentSequence& seq, double tol) {
  HarmonicSum out{seq.p(), 0.0};
  if (!seq.has_tail()) return out;
  std::size_t m = seq.head_size();
  while (seq.remainder_after(m) > tol) ++m;
  out.tail_bound = seq.remainder_after(m);
  return out;
}

ProductEstimate conjugate_product(const ExponentSequence& seq, double tol) {
  ProductEstimate out{1.0, 0.0, seq.head_size()};
  for (std::size_t i = 1; i <= seq.head_size(); ++i) out.value *= seq.conjugate(i);
  if (!seq.has_tail()) return out;
  for (std::size_t m = seq.head_size();; ++m) {
    // sum_{i>m} log p'_i <= sum_{i>m} 1/(p_i - 1) <= p'_{m+1} sum_{i>m} 1/p_i.
    const double log_remainder = seq.conjugate(m + 1) * seq.remainder_after(m);
    out.remainder_bound = out.value * std::expm1(log_remainder);
    out.terms = m;
    if (out.remainder_bound <= tol) return out;
    if (m >= kMaxProductTerms) {
      throw std::runtime_error("conjugate_product: tolerance " + std::to_string(tol) + " unreachable");
    }
    out.value *= seq.conjugate(m + 1);
  }
}

RegularityConstants regularity_constants(const ExponentSequence& seq, double tol) {
  RegularityConstants out;
  double log_sum = 0.0;
  ProductEstimate& g = out.grafakos_product;
  g.value = 1.0;
  auto factor = [&](std::size_t i) {
    const double pi = seq.exponent(i);
    const double ci = seq.conjugate(i);
    return std::pow(pi, ci / pi) * ci;
  };
  for (std::size_t i = 1; i <= seq.head_size(); ++i) {
    log_sum += std::log(seq.exponent(i)) / seq.exponent(i);
    g.value *= factor(i);
  }
  g.terms = seq.head_size();
  if (seq.has_tail()) {
    const GeometricTail& tail = *seq.tail();
    log_sum += tail_log_sum(tail, tail.start);
    for (std::size_t m = seq.head_size();; ++m) {
      // log g_i = p'_i (ln p_i)/p_i + ln p'_i <= p'_{m+1} (ln p_i + 1)/p_i for i > m.
      const double log_remainder = seq.conjugate(m + 1) * (tail_log_sum(tail, m + 1) + seq.remainder_after(m));
      g.remainder_bound = g.value * std::expm1(log_remainder);
      g.terms = m;
      if (g.remainder_bound <= tol) break;
      if (m >= kMaxProductTerms) {
        throw std::runtime_error("regularity_constants: tolerance unreachable");
      }
      g.value *= factor(m + 1);
    }
  }
  out.log_sum = {log_sum, SeriesStatus::finite};
  return out;
}

double ClosedFormSequence::term(std::size_t i) const {
  if (i >= 1 && i <= head.size()) return head[i - 1];
  if (coefficient == 0.0) return 0.0;
  return coefficient * std::pow(static_cast<double>(i), power) * std::pow(ratio, static_cast<double>(i));
}

SeriesClassification weighted_series_sum(const ClosedFormSequence& lambda, const ClosedFormSequence& b) {
  for (double li : lambda.head) {
    if (!(li > 0.0 && li < 1.0)) throw std::invalid_argument("lambda_i must lie in (0,1)");
  }
  if (!(lambda.coefficient > 0.0) || lambda.power != 0 || !(lambda.ratio > 0.0 && lambda.ratio < 1.0)) {
    throw std::invalid_argument("lambda needs a geometric tail c x^i with c > 0 and 0 < x < 1");
  }
  const std::size_t s = lambda.head.size() + 1;
  if (!(lambda.term(s) < 1.0)) throw std::invalid_argument("lambda_i must lie in (0,1)");
  double total = lambda.coefficient * geometric_sum(lambda.ratio, s);
  for (double li : lambda.head) total += li;
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("lambda must sum to 1");

  const std::size_t head_end = std::max(lambda.head.size(), b.head.size());
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 1; i <= head_end; ++i) {
    const double t = lambda.term(i) * b.term(i);
    (t >= 0 ? pos : neg) += std::abs(t);
  }
  bool pos_diverges = false, neg_diverges = false;
  const double c = lambda.coefficient * b.coefficient;
  const double y = lambda.ratio * b.ratio;
  if (c != 0.0 && y != 0.0) {
    if (std::abs(y) >= 1.0) {
      if (y < 0) {
        pos_diverges = neg_diverges = true;
      } else {
        (c > 0 ? pos_diverges : neg_diverges) = true;
      }
    } else {
      // Partial sums until the ratio-test remainder is negligible.
      const int k = b.power;
      for (std::size_t i = head_end + 1;; ++i) {
        const double t = c * std::pow(static_cast<double>(i), k) * std::pow(y, static_cast<double>(i));
        (t >= 0 ? pos : neg) += std::abs(t);
        const double q = std::pow((i + 2.0) / (i + 1.0), k) * std::abs(y);
        if (q < 1.0) {
          const double next = std::abs(t) * std::pow((i + 1.0) / i, k) * std::abs(y);
          if (next / (1.0 - q) <= 1e-17 * (pos + neg + 1e-300)) break;
        }
        if (i > head_end + 100'000'000) break;
      }
    }
  }
  SeriesClassification out;
  if (pos_diverges && neg_diverges) {
    out = {std::numeric_limits<double>::quiet_NaN(), SeriesStatus::undefined};
  } else if (pos_diverges) {
    out = {std::numeric_limits<double>::infinity(), SeriesStatus::plus_infinity};
  } else if (neg_diverges) {
    out = {-std::numeric_limits<double>::infinity(), SeriesStatus::minus_infinity};
  } else {
    out = {pos - neg, SeriesStatus::finite};
  }
  return out;
}

}  // namespace dyadlab
