#include "dyadlab/dyadic_model.hpp"

#include <charconv>

namespace dyadlab {

std::string to_string(const CubeId& cube) {
  std::string out = std::to_string(cube.level) + ":";
  for (std::size_t d = 0; d < cube.index.size(); ++d) {
    if (d) out += ',';
    out += std::to_string(cube.index[d]);
  }
  return out;
}

CubeId parse_cube_id(std::string_view text) {
  const auto fail = [&] { return std::invalid_argument("malformed cube id '" + std::string(text) + "'"); };
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw fail();
  CubeId cube;
  auto parse = [&](std::string_view part, auto& out) {
    if (part.empty()) throw fail();
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || ptr != part.data() + part.size()) throw fail();
  };
  parse(text.substr(0, colon), cube.level);
  std::string_view rest = text.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    std::int64_t value = 0;
    parse(rest.substr(0, comma), value);
    cube.index.push_back(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return cube;
}

DyadicModel::DyadicModel(int dimension, int depth, std::int64_t leaf_budget)
    : dimension_(dimension), depth_(depth) {
  if (dimension < 1) throw std::invalid_argument("model dimension must be at least 1");
  if (depth < 0) throw std::invalid_argument("model depth must be nonnegative");
  if (dimension * depth > 40 || (std::int64_t{1} << (dimension * depth)) > leaf_budget) {
    throw std::invalid_argument("model with 2^" + std::to_string(dimension * depth) +
                                " leaves exceeds the leaf budget of " + std::to_string(leaf_budget));
  }
  cube_count_ = 0;
  for (int k = 0; k <= depth; ++k) cube_count_ += cubes_at(k);
  if (dimension_ > 1) {
    tree_to_row_.resize(static_cast<std::size_t>(leaf_count()));
    for (std::int64_t t = 0; t < leaf_count(); ++t) tree_to_row_[t] = lex_rank(depth_, t);
  }
}

std::int64_t DyadicModel::position(const CubeId& cube) const {
  check_cube(cube);
  std::int64_t pos = 0;
  for (int bit = cube.level - 1; bit >= 0; --bit) {
    for (int d = 0; d < dimension_; ++d) pos = (pos << 1) | ((cube.index[d] >> bit) & 1);
  }
  return pos;
}

CubeId DyadicModel::cube(int level, std::int64_t position) const {
  if (level < 0 || level > depth_ || position < 0 || position >= cubes_at(level)) {
    throw std::out_of_range("cube position out of range");
  }
  CubeId out{level, std::vector<std::int64_t>(dimension_, 0)};
  for (int bit = 0; bit < level; ++bit) {
    for (int d = dimension_ - 1; d >= 0; --d) {
      out.index[d] |= (position & 1) << bit;
      position >>= 1;
    }
  }
  return out;
}

std::int64_t DyadicModel::lex_rank(int level, std::int64_t position) const {
  if (dimension_ == 1) return position;
  const CubeId c = cube(level, position);
  std::int64_t rank = 0;
  for (int d = 0; d < dimension_; ++d) rank = (rank << level) | c.index[d];
  return rank;
}

std::int64_t DyadicModel::position_of_rank(int level, std::int64_t rank) const {
  if (dimension_ == 1) return rank;
  CubeId c{level, std::vector<std::int64_t>(dimension_, 0)};
  const std::int64_t mask = (std::int64_t{1} << level) - 1;
  for (int d = dimension_ - 1; d >= 0; --d) {
    c.index[d] = rank & mask;
    rank >>= level;
  }
  return position(c);
}

bool DyadicModel::contains(const CubeId& outer, const CubeId& inner) const {
  check_cube(outer);
  check_cube(inner);
  if (outer.level > inner.level) return false;
  const int shift = inner.level - outer.level;
  for (int d = 0; d < dimension_; ++d) {
    if ((inner.index[d] >> shift) != outer.index[d]) return false;
  }
  return true;
}

void DyadicModel::check_cube(const CubeId& cube) const {
  if (cube.level < 0 || cube.level > depth_) {
    throw std::out_of_range("cube " + to_string(cube) + " has a level outside the model");
  }
  if (static_cast<int>(cube.index.size()) != dimension_) {
    throw std::invalid_argument("cube " + to_string(cube) + " has the wrong dimension");
  }
  for (std::int64_t i : cube.index) {
    if (i < 0 || i >= (std::int64_t{1} << cube.level)) {
      throw std::out_of_range("cube " + to_string(cube) + " has an index outside [0, 2^level)");
    }
  }
}

std::vector<CubeId> DyadicModel::cubes() const {
  std::vector<CubeId> out;
  out.reserve(static_cast<std::size_t>(cube_count_));
  for_each_cube([&](int level, std::int64_t pos) { out.push_back(cube(level, pos)); });
  return out;
}

Mask DyadicModel::to_tree(const Mask& row_major) const {
  check_size(row_major.size());
  if (dimension_ == 1) return row_major;
  Mask out(row_major.size());
  for (Eigen::Index t = 0; t < out.size(); ++t) out[t] = row_major[tree_to_row_[t]];
  return out;
}

Mask DyadicModel::from_tree(const Mask& tree) const {
  check_size(tree.size());
  if (dimension_ == 1) return tree;
  Mask out(tree.size());
  for (Eigen::Index t = 0; t < out.size(); ++t) out[tree_to_row_[t]] = tree[t];
  return out;
}

}  // namespace dyadlab
