#ifndef DYADLAB_NORM_SEARCH_HPP
#define DYADLAB_NORM_SEARCH_HPP

#include "dyadlab/weight_constants.hpp"

#include <cstdint>
#include <string>

namespace dyadlab {

enum class OperatorKind { weak, strong };

const char* to_string(OperatorKind kind) noexcept;

/// The product maximal operator from prod_i L^{p_i}(omega_i) to L^p(v)
/// (strong) or L^{p,inf}(v) (weak). A head of one coordinate with v = omega
/// is the classical M_d on L^p(omega).
struct OperatorSpec {
  OperatorKind kind = OperatorKind::strong;
  WeightVector<double> weights;
};

/// lambda v({m >= lambda})^{1/p}, or with {m > lambda} when strict.
double weak_quantity(const DyadicModel& model, const LeafFunction<double>& m, const LeafFunction<double>& v,
                     double p, double lambda, bool strict = false);

/// sup over the positive leaf values lambda of m of lambda v({m >= lambda})^{1/p}.
double weak_sup(const DyadicModel& model, const LeafFunction<double>& m, const LeafFunction<double>& v, double p);

/// ||M F||_{L^p(v)} / prod ||f_i||_{L^{p_i}(omega_i)}, or the weak-type
/// analogue; 0 when the denominator vanishes.
double rayleigh_ratio(const DyadicModel& model, const OperatorSpec& spec, const FunctionVector<double>& F);

/// The vector sigma chi_B: head sigma_i chi_B, tail template chi_B.
template <typename Scalar>
FunctionVector<Scalar> testing_vector(const DyadicModel& model, const WeightVector<Scalar>& W, const CubeId& cube) {
  const Mask mask = cube_mask(model, cube);
  std::vector<LeafFunction<Scalar>> head;
  for (const auto& s : W.sigmas()) {
    LeafFunction<Scalar> f = s;
    for (Eigen::Index x = 0; x < f.size(); ++x) {
      if (!mask[x]) f[x] = Scalar(0);
    }
    head.push_back(std::move(f));
  }
  return make_function_vector(model, std::move(head), mask, W.exponents());
}

/// Per cube B, the weak ratio of the testing vector sigma chi_B, maximized
/// over lambda. The maximum over cubes is a lower bound for the weak norm.
ConstantReport testing_family_weak(const DyadicModel& model, const WeightVector<double>& W);
ConstantReport testing_family_weak(const DyadicModel& model, const WeightVector<Rational>& W);

struct SearchBudget {
  int restarts = 64;
  int sweeps = 100;
};

struct NormCertificate {
  OperatorSpec spec;
  double lower_bound = 0.0;
  FunctionVector<double> witness;
  std::string strategy;  // testing_family | perturbation | random_restart
  std::int64_t iterations = 0;
  std::uint64_t seed = 0;
  std::optional<CubeId> testing_cube;
};

/// Best ratio found over the testing family sigma chi_B (every cube), then
/// random restarts refined by multiplicative coordinate ascent. Deterministic
/// for a given seed at any thread count.
NormCertificate estimate_norm(const DyadicModel& model, const OperatorSpec& spec, const SearchBudget& budget,
                              std::uint64_t seed, unsigned threads = 1);

}  // namespace dyadlab

#endif  // DYADLAB_NORM_SEARCH_HPP
