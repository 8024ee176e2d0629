#include "dyadlab/function_vectors.hpp"

namespace dyadlab {

double product_norm(const DyadicModel& model, const FunctionVector<double>& F, const WeightVector<double>* W) {
  const ExponentSequence& seq = F.exponents;
  if (W && W->head_size() != F.head.size()) {
    throw std::invalid_argument("weight vector and function vector head sizes differ");
  }
  double out = 1.0;
  for (std::size_t i = 0; i < F.head.size(); ++i) {
    out *= lp_norm(model, F.head[i], to_double(seq.head()[i]), W ? &W->omegas()[i] : nullptr);
  }
  if (F.has_tail()) {
    out *= std::pow(support_measure(model, F.tail_support), to_double(seq.tail_inverse_sum()));
  }
  return out;
}

FunctionVector<double> to_double(const FunctionVector<Rational>& F) {
  FunctionVector<double> out{{}, F.tail_support, F.exponents};
  out.head.reserve(F.head.size());
  for (const auto& f : F.head) out.head.push_back(to_double(f));
  return out;
}

WeightVector<double> to_double(const DyadicModel& model, const WeightVector<Rational>& W) {
  std::vector<LeafFunction<double>> omegas, sigmas;
  for (const auto& w : W.omegas()) omegas.push_back(to_double(w));
  for (const auto& s : W.sigmas()) sigmas.push_back(to_double(s));
  model.check_size(W.v().size());
  return WeightVector<double>::from_parts(W.exponents(), to_double(W.v()), std::move(omegas), std::move(sigmas));
}

}  // namespace dyadlab
