#ifndef DYADLAB_FUNCTION_VECTORS_HPP
#define DYADLAB_FUNCTION_VECTORS_HPP

#include "dyadlab/dyadic_model.hpp"
#include "dyadlab/exponents.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace dyadlab {

/// An infinite vector (f_1, f_2, ...): N explicit head coordinates, and for
/// every i > N the same indicator template chi_E. Without a tail in the
/// exponent sequence there are no coordinates past the head and the template
/// plays no role.
template <typename Scalar>
struct FunctionVector {
  std::vector<LeafFunction<Scalar>> head;
  Mask tail_support;  // row-major leaf mask of E
  ExponentSequence exponents;

  bool has_tail() const noexcept { return exponents.has_tail(); }
};

template <typename Scalar>
FunctionVector<Scalar> make_function_vector(const DyadicModel& model, std::vector<LeafFunction<Scalar>> head,
                                            Mask tail_support, ExponentSequence seq) {
  if (head.size() != seq.head_size()) {
    throw std::invalid_argument("function vector has " + std::to_string(head.size()) +
                                " head coordinates but the exponent head has " +
                                std::to_string(seq.head_size()));
  }
  for (std::size_t i = 0; i < head.size(); ++i) {
    validate_leaf_function(model, head[i], "head coordinate f_" + std::to_string(i + 1));
  }
  model.check_size(tail_support.size());
  return {std::move(head), std::move(tail_support), std::move(seq)};
}

/// Tail given as a template function; it must be 0/1-valued, and any value
/// above 1 makes the infinite power diverge.
template <typename Scalar>
FunctionVector<Scalar> make_function_vector(const DyadicModel& model, std::vector<LeafFunction<Scalar>> head,
                                            const LeafFunction<Scalar>& tail_template, ExponentSequence seq) {
  model.check_size(tail_template.size());
  Mask support(tail_template.size());
  for (Eigen::Index i = 0; i < tail_template.size(); ++i) {
    const Scalar& t = tail_template[i];
    if (t > 1) throw std::invalid_argument("tail diverges: template value exceeds 1");
    if (t != 0 && t != 1) throw std::invalid_argument("tail template must be an indicator (values 0 or 1)");
    support[i] = t == 1;
  }
  return make_function_vector(model, std::move(head), std::move(support), std::move(seq));
}

/// Template chi of the whole unit cube.
template <typename Scalar>
FunctionVector<Scalar> make_function_vector(const DyadicModel& model, std::vector<LeafFunction<Scalar>> head,
                                            ExponentSequence seq) {
  return make_function_vector(model, std::move(head), Mask::Constant(model.leaf_count(), true), std::move(seq));
}

/// prod(head) * lim_m t^m: the limit is 1 for t = 1 and 0 for t in [0,1).
template <typename Scalar>
Scalar infinite_pointwise_product(std::span<const Scalar> head, const Scalar& t) {
  if (t > 1) throw std::invalid_argument("tail diverges: tail factor exceeds 1");
  if (t < 0) throw std::invalid_argument("tail factor must be nonnegative");
  Scalar out(1);
  for (const Scalar& h : head) {
    if (h < 0) throw std::invalid_argument("head factors must be nonnegative");
    out *= h;
  }
  return t == 1 ? out : Scalar(0);
}

/// prod_i f_i(x) per leaf, with the tail coordinates entering through the
/// infinite power of the template value.
template <typename Scalar>
LeafFunction<Scalar> pointwise_product(const FunctionVector<Scalar>& F) {
  const Eigen::Index size = F.tail_support.size();
  LeafFunction<Scalar> out = LeafFunction<Scalar>::Ones(size);
  for (const auto& f : F.head) out = out.cwiseProduct(f);
  if (F.has_tail()) {
    for (Eigen::Index x = 0; x < size; ++x) {
      if (!F.tail_support[x]) out[x] = Scalar(0);
    }
  }
  return out;
}

/// Dual weight omega^{-1/(p-1)}. Exact mode demands a rational result.
template <typename Scalar>
LeafFunction<Scalar> dual_weight(const LeafFunction<Scalar>& omega, const Rational& p) {
  LeafFunction<Scalar> out(omega.size());
  if constexpr (is_exact_v<Scalar>) {
    const Rational e = Rational(-1) / (p - 1);
    for (Eigen::Index x = 0; x < omega.size(); ++x) {
      auto r = exact_power(omega[x], e);
      if (!r) {
        throw std::invalid_argument("exact mode: dual weight omega^(-1/(p-1)) with p = " + to_string(p) +
                                    " is irrational at a leaf; choose weights that are exact powers");
      }
      out[x] = *r;
    }
  } else {
    const double e = -1.0 / (to_double(p) - 1.0);
    out = omega.array().pow(e).matrix();
  }
  return out;
}

/// Weights (v, omega_1, ..., omega_N) with implied omega_i = 1 past the head,
/// and the dual weights sigma_i = omega_i^{-1/(p_i-1)}.
template <typename Scalar>
class WeightVector {
 public:
  WeightVector() = default;

  static WeightVector from_omegas(const DyadicModel& model, ExponentSequence seq, LeafFunction<Scalar> v,
                                  std::vector<LeafFunction<Scalar>> omegas) {
    if (omegas.size() != seq.head_size()) {
      throw std::invalid_argument("weight vector has " + std::to_string(omegas.size()) +
                                  " head weights but the exponent head has " + std::to_string(seq.head_size()));
    }
    validate_weight(model, v, "weight v");
    WeightVector w;
    w.sigmas_.reserve(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      validate_weight(model, omegas[i], "weight omega_" + std::to_string(i + 1));
      w.sigmas_.push_back(dual_weight(omegas[i], seq.head()[i]));
    }
    w.seq_ = std::move(seq);
    w.v_ = std::move(v);
    w.omegas_ = std::move(omegas);
    return w;
  }

  /// From dual weights: omega_i = sigma_i^{-(p_i-1)}.
  static WeightVector from_sigmas(const DyadicModel& model, ExponentSequence seq, LeafFunction<Scalar> v,
                                  const std::vector<LeafFunction<Scalar>>& sigmas) {
    if (sigmas.size() != seq.head_size()) {
      throw std::invalid_argument("weight vector has " + std::to_string(sigmas.size()) +
                                  " dual weights but the exponent head has " + std::to_string(seq.head_size()));
    }
    std::vector<LeafFunction<Scalar>> omegas;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      validate_weight(model, sigmas[i], "dual weight sigma_" + std::to_string(i + 1));
      omegas.push_back(dual_weight(sigmas[i], Rational(1) + Rational(1) / (seq.head()[i] - 1)));
    }
    validate_weight(model, v, "weight v");
    return from_parts(std::move(seq), std::move(v), std::move(omegas), sigmas);
  }

  /// Assembles already consistent parts without recomputing sigma.
  static WeightVector from_parts(ExponentSequence seq, LeafFunction<Scalar> v, std::vector<LeafFunction<Scalar>> omegas,
                                 std::vector<LeafFunction<Scalar>> sigmas) {
    WeightVector w;
    w.seq_ = std::move(seq);
    w.v_ = std::move(v);
    w.omegas_ = std::move(omegas);
    w.sigmas_ = std::move(sigmas);
    return w;
  }

  static WeightVector trivial(const DyadicModel& model, ExponentSequence seq) {
    const LeafFunction<Scalar> one = LeafFunction<Scalar>::Ones(model.leaf_count());
    std::vector<LeafFunction<Scalar>> omegas(seq.head_size(), one);
    return from_omegas(model, std::move(seq), one, std::move(omegas));
  }

  WeightVector with_v(const DyadicModel& model, LeafFunction<Scalar> v) const {
    validate_weight(model, v, "weight v");
    WeightVector w = *this;
    w.v_ = std::move(v);
    return w;
  }

  const ExponentSequence& exponents() const noexcept { return seq_; }
  const LeafFunction<Scalar>& v() const noexcept { return v_; }
  const std::vector<LeafFunction<Scalar>>& omegas() const noexcept { return omegas_; }
  const std::vector<LeafFunction<Scalar>>& sigmas() const noexcept { return sigmas_; }
  std::size_t head_size() const noexcept { return omegas_.size(); }

 private:
  ExponentSequence seq_;
  LeafFunction<Scalar> v_;
  std::vector<LeafFunction<Scalar>> omegas_;
  std::vector<LeafFunction<Scalar>> sigmas_;
};

/// ||f||_{L^p(w)} over the model; w = nullptr means Lebesgue.
inline double lp_norm(const DyadicModel& model, const LeafFunction<double>& f, double p,
                      const LeafFunction<double>* w = nullptr) {
  const Eigen::ArrayXd powered = f.array().pow(p);
  const double sum = w ? (powered * w->array()).sum() : powered.sum();
  return std::pow(sum * model.leaf_measure<double>(), 1.0 / p);
}

/// Lebesgue measure of the tail support.
inline double support_measure(const DyadicModel& model, const Mask& support) {
  return static_cast<double>(support.count()) * model.leaf_measure<double>();
}

/// prod_i ||f_i||_{L^{p_i}(omega_i)}: the head norms times the closed form
/// |E|^{s_N} of the tail norms prod_{i>N} ||chi_E||_{L^{p_i}}.
/// W = nullptr means all omega_i = 1.
double product_norm(const DyadicModel& model, const FunctionVector<double>& F,
                    const WeightVector<double>* W = nullptr);

inline double product_norm(const DyadicModel& model, const FunctionVector<double>& F,
                           const WeightVector<double>& W) {
  return product_norm(model, F, &W);
}

/// Exact rational vectors to double ones.
FunctionVector<double> to_double(const FunctionVector<Rational>& F);
WeightVector<double> to_double(const DyadicModel& model, const WeightVector<Rational>& W);

}  // namespace dyadlab

#endif  // DYADLAB_FUNCTION_VECTORS_HPP
