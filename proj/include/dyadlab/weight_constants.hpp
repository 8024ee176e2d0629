#ifndef DYADLAB_WEIGHT_CONSTANTS_HPP
#define DYADLAB_WEIGHT_CONSTANTS_HPP

#include "dyadlab/operators.hpp"
#include "dyadlab/power_product.hpp"

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dyadlab {

/// value^power == value_power exactly.
struct ExactValue {
  Integer power{1};
  Rational value_power{0};
};

/// Exact comparison of the two underlying (possibly irrational) values.
int compare(const ExactValue& a, const ExactValue& b);

/// A weight constant: the maximum over all cubes of a per-cube quantity.
/// Ties go to the first cube in enumeration order.
struct ConstantReport {
  std::string name;
  double value = 0.0;  // +inf allowed
  std::optional<CubeId> attaining_cube;
  std::vector<std::pair<CubeId, double>> per_cube_values;  // enumeration order
  std::string mode = "float";
  std::optional<ExactValue> exact;
};

/// Nonnegative numbers a_B indexed by the cubes of a model; absent cubes are 0.
template <typename Scalar>
class CarlesonFamily {
 public:
  explicit CarlesonFamily(const DyadicModel& model) : values_(model.depth() + 1) {
    for (int k = 0; k <= model.depth(); ++k) values_[k] = Vec<Scalar>::Zero(model.cubes_at(k));
  }

  CarlesonFamily(const DyadicModel& model, const std::map<CubeId, Scalar>& entries) : CarlesonFamily(model) {
    for (const auto& [cube, a] : entries) set(model, cube, a);
  }

  void set(const DyadicModel& model, const CubeId& cube, const Scalar& a) {
    if (a < 0) throw std::invalid_argument("Carleson coefficient a_" + to_string(cube) + " is negative");
    values_.at(cube.level)[model.position(cube)] = a;
  }
  Scalar at(const DyadicModel& model, const CubeId& cube) const { return values_.at(cube.level)[model.position(cube)]; }

  /// Tree-ordered coefficients per level.
  const LevelValues<Scalar>& levels() const noexcept { return values_; }

  /// Nonzero entries in enumeration order.
  std::vector<std::pair<CubeId, Scalar>> entries(const DyadicModel& model) const {
    std::vector<std::pair<CubeId, Scalar>> out;
    model.for_each_cube([&](int k, std::int64_t pos) {
      if (values_[k][pos] != 0) out.emplace_back(model.cube(k, pos), values_[k][pos]);
    });
    return out;
  }

 private:
  LevelValues<Scalar> values_;
};

/// Maximum of per-cube values given per level in tree order.
ConstantReport max_over_cubes(const DyadicModel& model, std::string name, const LevelValues<double>& values);
/// Exact maximum of per-cube values given in enumeration order.
ConstantReport max_over_cubes(const DyadicModel& model, std::string name, const std::vector<PowerProduct>& values);

/// [v, omega]_{A_p}: max over cubes of (avg v)^{1/p} prod_{i<=N} (avg sigma_i)^{1/p'_i}.
ConstantReport ap_product_constant(const DyadicModel& model, const WeightVector<double>& W);
ConstantReport ap_product_constant(const DyadicModel& model, const WeightVector<Rational>& W);

/// [omega]_{A_p}: max over cubes of (avg omega)(avg sigma)^{p-1}, sigma = omega^{-1/(p-1)}.
ConstantReport classical_ap(const DyadicModel& model, const LeafFunction<double>& omega, const Rational& p);
ConstantReport classical_ap(const DyadicModel& model, const LeafFunction<Rational>& omega, const Rational& p);

/// prod_i [omega_i]_{A_{p_i}}^{1/p_i} from per-coordinate (constant, p_i).
double a_star_constant(std::span<const std::pair<double, double>> heads);
double a_star_constant(const DyadicModel& model, const WeightVector<double>& W);

/// nu_sigma = prod_i sigma_i^{p/p_i} (tail factors are 1).
LeafFunction<double> nu_sigma(const WeightVector<double>& W);
/// The alternative exponent convention prod_i omega_i^{1/p_i}.
LeafFunction<double> omega_product_one_over_p(const WeightVector<double>& W);
/// The convention prod_i omega_i^{p/p_i}.
LeafFunction<double> omega_product_p_over_p(const WeightVector<double>& W);

struct RhReport {
  ConstantReport report;
  LeafFunction<double> nu;
};

/// [omega]_{RH_p}: max over cubes of prod (avg sigma_i)^{p/p_i} / avg nu_sigma.
RhReport rh_constant(const DyadicModel& model, const WeightVector<double>& W);

/// int_B (M_d(sigma chi_B))^p v, for every cube at once, as per-level values
/// in tree order. O(K #cubes).
LevelValues<double> testing_integrals(const DyadicModel& model, const WeightVector<double>& W);
LevelValues<Rational> testing_integrals(const DyadicModel& model, const WeightVector<Rational>& W);

/// [v, omega]_{S_p}: max over cubes of
/// (int_B M_d(sigma chi_B)^p v)^{1/p} / prod_i (int_B sigma_i)^{1/p_i}.
/// The exact overload requires an integer p.
ConstantReport sp_testing_constant(const DyadicModel& model, const WeightVector<double>& W);
ConstantReport sp_testing_constant(const DyadicModel& model, const WeightVector<Rational>& W);

/// Smallest A with sum_{B subset G} a_B <= A int_G nu for every cube G
/// (B = G included); +inf when some int_G nu = 0 carries positive mass.
template <typename Scalar>
ConstantReport carleson_constant(const DyadicModel& model, const CarlesonFamily<Scalar>& a,
                                 const LeafFunction<Scalar>& nu) {
  validate_leaf_function(model, nu, "nu");
  LevelValues<Scalar> subtree = a.levels();
  const Eigen::Index b = model.branching();
  for (int k = model.depth() - 1; k >= 0; --k) {
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks(subtree[k + 1].data(), b,
                                                                                  model.cubes_at(k));
    subtree[k] += blocks.colwise().sum().transpose();
  }
  const CubeAggregate<Scalar> mass = aggregate(model, nu);
  ConstantReport out{"carleson", 0.0, std::nullopt, {}, is_exact_v<Scalar> ? "exact" : "float", std::nullopt};
  std::optional<Scalar> best;  // finite maximum so far
  bool infinite = false;
  model.for_each_cube([&](int k, std::int64_t pos) {
    const Scalar& num = subtree[k][pos];
    const Scalar& den = mass.integral[k][pos];
    const CubeId cube = model.cube(k, pos);
    double value;
    if (den == 0) {
      value = num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
      if (num > 0 && !infinite) {
        infinite = true;
        out.attaining_cube = cube;
      }
    } else {
      const Scalar ratio = num / den;
      value = to_double(ratio);
      if (!infinite && (!best || *best < ratio)) {
        best = ratio;
        out.attaining_cube = cube;
      }
    }
    out.per_cube_values.emplace_back(cube, value);
  });
  if (infinite) {
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.value = to_double(*best);
    if constexpr (is_exact_v<Scalar>) out.exact = ExactValue{Integer(1), *best};
  }
  return out;
}

}  // namespace dyadlab

#endif  // DYADLAB_WEIGHT_CONSTANTS_HPP
