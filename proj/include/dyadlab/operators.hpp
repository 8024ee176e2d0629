#ifndef DYADLAB_OPERATORS_HPP
#define DYADLAB_OPERATORS_HPP

#include "dyadlab/function_vectors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace dyadlab {

namespace detail {

template <typename Scalar>
Vec<Scalar> cwise_max(const Vec<Scalar>& a, const Vec<Scalar>& b) {
  return a.binaryExpr(b, [](const Scalar& x, const Scalar& y) { return x < y ? y : x; });
}

/// Number of tail-support leaves in every cube, per level.
inline std::vector<Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>> support_counts(const DyadicModel& model,
                                                                                   const Mask& support) {
  return level_sums(model, model.to_tree(support).cast<std::int64_t>().matrix().eval());
}

}  // namespace detail

/// Top-down running maximum of cube values over each leaf's ancestor chain,
/// restricted to levels >= from_level. Result in tree order.
template <typename Scalar>
Vec<Scalar> running_max(const DyadicModel& model, const LevelValues<Scalar>& cube_values, int from_level = 0) {
  Vec<Scalar> current = cube_values[from_level];
  for (int k = from_level + 1; k <= model.depth(); ++k) {
    current = detail::cwise_max(broadcast(model, current, k - 1, k), cube_values[k]);
  }
  return current;
}

/// M_d f: per leaf, the largest average of f over the cubes containing it.
template <typename Scalar>
LeafFunction<Scalar> maximal(const DyadicModel& model, const LeafFunction<Scalar>& f) {
  validate_leaf_function(model, f, "f");
  return model.from_tree(running_max(model, level_averages(model, model.to_tree(f))));
}

/// mu-weighted averages (int_B f mu) / (int_B mu) over every cube.
template <typename Scalar>
LevelValues<Scalar> weighted_averages(const DyadicModel& model, const LeafFunction<Scalar>& f,
                                      const LeafFunction<Scalar>& mu) {
  const LevelValues<Scalar> num = level_sums(model, model.to_tree(LeafFunction<Scalar>(f.cwiseProduct(mu))));
  const LevelValues<Scalar> den = level_sums(model, model.to_tree(mu));
  LevelValues<Scalar> out(num.size());
  for (std::size_t k = 0; k < num.size(); ++k) out[k] = num[k].cwiseQuotient(den[k]);
  return out;
}

/// M_d^mu f: as `maximal` with mu-averages.
template <typename Scalar>
LeafFunction<Scalar> weighted_maximal(const DyadicModel& model, const LeafFunction<Scalar>& f,
                                      const LeafFunction<Scalar>& mu) {
  validate_leaf_function(model, f, "f");
  validate_weight(model, mu, "measure mu");
  return model.from_tree(running_max(model, weighted_averages(model, f, mu)));
}

template <typename Scalar>
struct ProductMaximalOptions {
  /// Per-head-coordinate measures sigma_i for the weighted operator; tail
  /// coordinates always use Lebesgue measure (their weights are 1).
  const std::vector<LeafFunction<Scalar>>* measures = nullptr;
  /// Only cubes with level >= level_floor enter the supremum.
  int level_floor = 0;
};

/// Per cube: prod_i avg_B f_i, the tail contributing lim_m (avg_B chi_E)^m,
/// which is 1 exactly when B lies inside E.
template <typename Scalar>
LevelValues<Scalar> cube_products(const DyadicModel& model, const FunctionVector<Scalar>& F,
                                  const std::vector<LeafFunction<Scalar>>* measures = nullptr) {
  if (measures && measures->size() != F.head.size()) {
    throw std::invalid_argument("one measure per head coordinate is required");
  }
  LevelValues<Scalar> out(model.depth() + 1);
  for (int k = 0; k <= model.depth(); ++k) out[k] = Vec<Scalar>::Ones(model.cubes_at(k));
  for (std::size_t i = 0; i < F.head.size(); ++i) {
    const LevelValues<Scalar> avg = measures ? weighted_averages(model, F.head[i], (*measures)[i])
                                             : level_averages(model, model.to_tree(F.head[i]));
    for (int k = 0; k <= model.depth(); ++k) out[k] = out[k].cwiseProduct(avg[k]);
  }
  if (F.has_tail()) {
    const auto counts = detail::support_counts(model, F.tail_support);
    for (int k = 0; k <= model.depth(); ++k) {
      const std::int64_t full = model.leaves_per_cube(k);
      for (Eigen::Index c = 0; c < counts[k].size(); ++c) {
        if (counts[k][c] != full) out[k][c] = Scalar(0);
      }
    }
  }
  return out;
}

/// The product maximal operator sup_{B containing x} prod_i avg_B f_i (or the
/// sigma-weighted variant), one top-down sweep.
template <typename Scalar>
LeafFunction<Scalar> product_maximal(const DyadicModel& model, const FunctionVector<Scalar>& F,
                                     const ProductMaximalOptions<Scalar>& options = {}) {
  if (options.level_floor < 0 || options.level_floor > model.depth()) {
    throw std::out_of_range("level floor outside the model");
  }
  return model.from_tree(running_max(model, cube_products(model, F, options.measures), options.level_floor));
}

namespace detail {

/// (level, position) of the inclusion-maximal cubes whose value exceeds
/// (or reaches, when !strict) the threshold, in enumeration order.
template <typename Scalar>
std::vector<std::pair<int, std::int64_t>> maximal_cubes(const DyadicModel& model, const LevelValues<Scalar>& values,
                                                        const Scalar& threshold, bool strict) {
  std::vector<std::pair<int, std::int64_t>> out;
  Mask covered = Mask::Constant(1, false);
  for (int k = 0; k <= model.depth(); ++k) {
    if (k > 0) {
      Mask next(model.cubes_at(k));
      const std::int64_t b = model.branching();
      for (Eigen::Index c = 0; c < next.size(); ++c) {
        const Eigen::Index parent = c / b;
        const Scalar& pv = values[k - 1][parent];
        next[c] = covered[parent] || (strict ? pv > threshold : pv >= threshold);
      }
      covered = std::move(next);
    }
    const std::int64_t count = model.cubes_at(k);
    for (std::int64_t rank = 0; rank < count; ++rank) {
      const std::int64_t pos = model.position_of_rank(k, rank);
      const Scalar& v = values[k][pos];
      if (!covered[pos] && (strict ? v > threshold : v >= threshold)) out.emplace_back(k, pos);
    }
  }
  return out;
}

}  // namespace detail

/// Maximal dyadic cubes with prod avg f_i > lambda (>= when !strict); they are
/// pairwise disjoint and cover exactly {product_maximal > lambda}.
template <typename Scalar>
std::vector<CubeId> superlevel_maximal_cubes(const DyadicModel& model, const FunctionVector<Scalar>& F,
                                             const Scalar& lambda, bool strict,
                                             const std::vector<LeafFunction<Scalar>>* measures = nullptr) {
  if (!(lambda > 0)) throw std::invalid_argument("superlevel threshold must be positive");
  std::vector<CubeId> out;
  for (auto [k, pos] : detail::maximal_cubes(model, cube_products(model, F, measures), lambda, strict)) {
    out.push_back(model.cube(k, pos));
  }
  return out;
}

/// Row-major leaf mask of a cube.
inline Mask cube_mask(const DyadicModel& model, const CubeId& cube) {
  Mask tree = Mask::Constant(model.leaf_count(), false);
  const std::int64_t width = model.leaves_per_cube(cube.level);
  tree.segment(model.position(cube) * width, width).setConstant(true);
  return model.from_tree(tree);
}

/// One band S_k = {alpha^k < M F <= alpha^{k+1}} with its selected cubes
/// B_{k,j} (maximal cubes at threshold alpha^k, enumeration order) and the
/// disjointified pieces E_{k,j}.
struct StoppingBand {
  int k = 0;
  Mask set;
  std::vector<CubeId> cubes;
  std::vector<Mask> pieces;
};

template <typename Scalar>
struct StoppingDecomposition {
  Scalar ratio;
  std::vector<StoppingBand> bands;  // increasing k, nonempty S_k only
};

/// The k with alpha^k < m <= alpha^{k+1}, for m > 0.
template <typename Scalar>
int band_index(const Scalar& m, const Scalar& alpha) {
  int k = static_cast<int>(std::ceil(std::log(to_double(m)) / std::log(to_double(alpha)))) - 1;
  while (!(pow_int(alpha, k) < m)) --k;
  while (pow_int(alpha, k + 1) < m) ++k;
  return k;
}

template <typename Scalar>
StoppingDecomposition<Scalar> stopping_decomposition(const DyadicModel& model, const FunctionVector<Scalar>& F,
                                                     const Scalar& alpha) {
  if (!(alpha > 1)) throw std::invalid_argument("stopping ratio alpha must exceed 1");
  const LevelValues<Scalar> products = cube_products(model, F);
  const Vec<Scalar> m = model.from_tree(running_max(model, products));
  std::map<int, Mask> sets;
  for (Eigen::Index x = 0; x < m.size(); ++x) {
    if (!(m[x] > 0)) continue;
    auto [it, inserted] = sets.try_emplace(band_index(m[x], alpha), Mask::Constant(m.size(), false));
    it->second[x] = true;
  }
  StoppingDecomposition<Scalar> out{alpha, {}};
  for (auto& [k, set] : sets) {
    StoppingBand band{k, std::move(set), {}, {}};
    Mask claimed = Mask::Constant(m.size(), false);
    for (auto [level, pos] : detail::maximal_cubes(model, products, pow_int(alpha, k), true)) {
      band.cubes.push_back(model.cube(level, pos));
      const Mask b = cube_mask(model, band.cubes.back());
      band.pieces.push_back(b && !claimed && band.set);
      claimed = claimed || b;
    }
    out.bands.push_back(std::move(band));
  }
  return out;
}

}  // namespace dyadlab

#endif  // DYADLAB_OPERATORS_HPP
