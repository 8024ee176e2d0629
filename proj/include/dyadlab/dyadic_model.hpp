#ifndef DYADLAB_DYADIC_MODEL_HPP
#define DYADLAB_DYADIC_MODEL_HPP

#include "dyadlab/scalar.hpp"

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyadlab {

/// A dyadic cube of the model: level k and a multi-index in [0, 2^k)^n.
/// The defaulted ordering (level, then lexicographic index) is the
/// enumeration order used for every tie-break.
struct CubeId {
  int level = 0;
  std::vector<std::int64_t> index;

  friend auto operator<=>(const CubeId&, const CubeId&) = default;
  friend bool operator==(const CubeId&, const CubeId&) = default;
};

/// "k:i0,i1,..."
std::string to_string(const CubeId& cube);
CubeId parse_cube_id(std::string_view text);

/// Values on the cells of the finest level, row-major over the leaf
/// multi-index (first coordinate slowest). Weights are LeafFunctions that are
/// strictly positive.
template <typename Scalar>
using LeafFunction = Vec<Scalar>;

/// Per-level cube values in tree order (see DyadicModel).
template <typename Scalar>
using LevelValues = std::vector<Vec<Scalar>>;

/// The complete 2^n-ary tree of dyadic cubes of levels 0..K over [0,1)^n.
///
/// Internally every level is stored in tree (Morton) order: the 2^n children
/// of the cube at position c on level k sit at positions [c 2^n, (c+1) 2^n)
/// on level k+1, so the leaves of any cube form one contiguous block. All
/// bottom-up passes are then reshapes with column reductions, and top-down
/// passes are column replications. For n = 1 tree order and row-major order
/// coincide.
class DyadicModel {
 public:
  static constexpr std::int64_t kDefaultLeafBudget = std::int64_t{1} << 22;

  DyadicModel(int dimension, int depth, std::int64_t leaf_budget = kDefaultLeafBudget);

  int dimension() const noexcept { return dimension_; }
  int depth() const noexcept { return depth_; }
  std::int64_t branching() const noexcept { return std::int64_t{1} << dimension_; }
  std::int64_t leaf_count() const noexcept { return cubes_at(depth_); }
  std::int64_t cubes_at(int level) const noexcept { return std::int64_t{1} << (dimension_ * level); }
  std::int64_t cube_count() const noexcept { return cube_count_; }
  std::int64_t leaves_per_cube(int level) const noexcept { return cubes_at(depth_ - level); }

  template <typename Scalar>
  Scalar cube_measure(int level) const {
    return dyadic_measure<Scalar>(dimension_ * level);
  }
  template <typename Scalar>
  Scalar leaf_measure() const {
    return cube_measure<Scalar>(depth_);
  }

  /// Tree-order position of a cube on its level.
  std::int64_t position(const CubeId& cube) const;
  CubeId cube(int level, std::int64_t position) const;
  /// Lexicographic rank of the cube at `position` on `level`.
  std::int64_t lex_rank(int level, std::int64_t position) const;
  std::int64_t position_of_rank(int level, std::int64_t rank) const;

  bool contains(const CubeId& outer, const CubeId& inner) const;
  void check_cube(const CubeId& cube) const;

  /// All cubes in enumeration order (level, then lexicographic index).
  std::vector<CubeId> cubes() const;

  /// f(level, position) for every cube in enumeration order.
  template <typename F>
  void for_each_cube(F&& f) const {
    for (int level = 0; level <= depth_; ++level) {
      const std::int64_t count = cubes_at(level);
      for (std::int64_t rank = 0; rank < count; ++rank) f(level, position_of_rank(level, rank));
    }
  }

  /// Row-major leaf vector -> tree order, and back.
  template <typename Scalar>
  Vec<Scalar> to_tree(const Vec<Scalar>& row_major) const {
    check_size(row_major.size());
    if (dimension_ == 1) return row_major;
    Vec<Scalar> out(row_major.size());
    for (Eigen::Index t = 0; t < out.size(); ++t) out[t] = row_major[tree_to_row_[t]];
    return out;
  }
  template <typename Scalar>
  Vec<Scalar> from_tree(const Vec<Scalar>& tree) const {
    check_size(tree.size());
    if (dimension_ == 1) return tree;
    Vec<Scalar> out(tree.size());
    for (Eigen::Index t = 0; t < out.size(); ++t) out[tree_to_row_[t]] = tree[t];
    return out;
  }
  Mask to_tree(const Mask& row_major) const;
  Mask from_tree(const Mask& tree) const;

  /// Row-major leaf index of the tree position t.
  std::int64_t row_index(std::int64_t tree_position) const {
    return dimension_ == 1 ? tree_position : tree_to_row_[tree_position];
  }

  void check_size(Eigen::Index size) const {
    if (size != leaf_count()) {
      throw std::invalid_argument("leaf function has " + std::to_string(size) + " values, model has " +
                                  std::to_string(leaf_count()) + " leaves");
    }
  }

  friend bool operator==(const DyadicModel& a, const DyadicModel& b) {
    return a.dimension_ == b.dimension_ && a.depth_ == b.depth_;
  }

 private:
  int dimension_;
  int depth_;
  std::int64_t cube_count_;
  std::vector<std::int64_t> tree_to_row_;
};

/// Throws unless f has one nonnegative value per leaf.
template <typename Scalar>
void validate_leaf_function(const DyadicModel& model, const LeafFunction<Scalar>& f, std::string_view what) {
  model.check_size(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
  }
}

/// Throws unless w has one strictly positive value per leaf.
template <typename Scalar>
void validate_weight(const DyadicModel& model, const LeafFunction<Scalar>& w, std::string_view what) {
  model.check_size(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0)) throw std::invalid_argument(std::string(what) + " must be strictly positive");
  }
}

/// Per-cube averages from tree-ordered leaf values, level by level.
template <typename Scalar>
LevelValues<Scalar> level_averages(const DyadicModel& model, Vec<Scalar> tree_leaves) {
  LevelValues<Scalar> levels(model.depth() + 1);
  levels[model.depth()] = std::move(tree_leaves);
  const Eigen::Index b = model.branching();
  const Scalar inv_b = Scalar(1) / Scalar(static_cast<int>(b));
  for (int k = model.depth() - 1; k >= 0; --k) {
    const Vec<Scalar>& child = levels[k + 1];
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks(child.data(), b,
                                                                                  model.cubes_at(k));
    levels[k] = blocks.colwise().sum().transpose() * inv_b;
  }
  return levels;
}

/// Per-cube sums of tree-ordered values (no measure factor).
template <typename Scalar>
LevelValues<Scalar> level_sums(const DyadicModel& model, Vec<Scalar> tree_leaves) {
  LevelValues<Scalar> levels(model.depth() + 1);
  levels[model.depth()] = std::move(tree_leaves);
  const Eigen::Index b = model.branching();
  for (int k = model.depth() - 1; k >= 0; --k) {
    const Vec<Scalar>& child = levels[k + 1];
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks(child.data(), b,
                                                                                  model.cubes_at(k));
    levels[k] = blocks.colwise().sum().transpose();
  }
  return levels;
}

/// Level values on `from` repeated onto the tree-ordered cubes of level `to`.
template <typename Scalar>
Vec<Scalar> broadcast(const DyadicModel& model, const Vec<Scalar>& values, int from, int to) {
  const Eigen::Index reps = model.cubes_at(to - from);
  Vec<Scalar> out(values.size() * reps);
  Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks(out.data(), reps, values.size());
  blocks = values.transpose().replicate(reps, 1);
  return out;
}

/// Integrals and averages of a leaf function over every cube.
template <typename Scalar>
struct CubeAggregate {
  LevelValues<Scalar> integral;
  LevelValues<Scalar> average;

  Scalar integral_of(const DyadicModel& model, const CubeId& cube) const {
    return integral[cube.level][model.position(cube)];
  }
  Scalar average_of(const DyadicModel& model, const CubeId& cube) const {
    return average[cube.level][model.position(cube)];
  }
};

/// One bottom-up pass, O(#cubes).
template <typename Scalar>
CubeAggregate<Scalar> aggregate(const DyadicModel& model, const LeafFunction<Scalar>& f) {
  validate_leaf_function(model, f, "leaf function");
  CubeAggregate<Scalar> out;
  out.average = level_averages(model, model.to_tree(f));
  out.integral.resize(out.average.size());
  for (int k = 0; k <= model.depth(); ++k) out.integral[k] = out.average[k] * model.cube_measure<Scalar>(k);
  return out;
}

/// E_k f: the level-k averages of f, constant on each level-k cube.
template <typename Scalar>
LeafFunction<Scalar> cond_expectation(const DyadicModel& model, const LeafFunction<Scalar>& f, int k) {
  if (k < 0 || k > model.depth()) {
    throw std::out_of_range("conditional expectation level " + std::to_string(k) + " outside [0, " +
                            std::to_string(model.depth()) + "]");
  }
  const LevelValues<Scalar> avg = level_averages(model, model.to_tree(f));
  return model.from_tree(broadcast(model, avg[k], k, model.depth()));
}

/// mu(B) = integral of mu over B.
template <typename Scalar>
Scalar weighted_measure(const DyadicModel& model, const LeafFunction<Scalar>& mu, const CubeId& cube) {
  model.check_cube(cube);
  const Vec<Scalar> tree = model.to_tree(mu);
  const std::int64_t width = model.leaves_per_cube(cube.level);
  const Scalar sum = tree.segment(model.position(cube) * width, width).sum();
  return sum * model.leaf_measure<Scalar>();
}

/// Integral of f over the whole model (leaf sum times leaf measure).
template <typename Scalar>
Scalar integral(const DyadicModel& model, const LeafFunction<Scalar>& f) {
  model.check_size(f.size());
  return f.sum() * model.leaf_measure<Scalar>();
}

}  // namespace dyadlab

#endif  // DYADLAB_DYADIC_MODEL_HPP
