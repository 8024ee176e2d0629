#include "dyadlab/dyadic_model.hpp"
#include "dyadlab/rng.hpp"

#include <doctest.h>

#include "oracles.hpp"

using namespace dyadlab;

namespace {

Vec<double> vec(std::initializer_list<double> xs) {
  Vec<double> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vec<Rational> random_rational(std::int64_t size, CounterRng& rng) {
  Vec<Rational> v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = Rational(static_cast<long>(rng.below(9)), 1 + static_cast<long>(rng.below(4)));
  return v;
}

}  // namespace

TEST_CASE("cube counts") {
  CHECK(DyadicModel(1, 2).leaf_count() == 4);
  CHECK(DyadicModel(1, 2).cube_count() == 7);
  CHECK(DyadicModel(2, 1).leaf_count() == 4);
  CHECK(DyadicModel(2, 1).cube_count() == 5);
  CHECK(DyadicModel(1, 0).cube_count() == 1);
  CHECK(DyadicModel(3, 2).cube_count() == 1 + 8 + 64);
  CHECK_THROWS_AS(DyadicModel(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(DyadicModel(1, -1), std::invalid_argument);
  CHECK_THROWS(DyadicModel(2, 20));
}

TEST_CASE("cube ids and tree order") {
  CHECK(to_string(CubeId{0, {0}}) == "0:0");
  CHECK(to_string(CubeId{2, {1, 3}}) == "2:1,3");
  CHECK(parse_cube_id("2:1,3") == CubeId{2, {1, 3}});
  CHECK_THROWS(parse_cube_id("x"));

  for (int n = 1; n <= 3; ++n) {
    const DyadicModel model(n, 3);
    const auto cubes = model.cubes();
    CHECK(static_cast<std::int64_t>(cubes.size()) == model.cube_count());
    CHECK(std::is_sorted(cubes.begin(), cubes.end()));
    for (const CubeId& c : cubes) CHECK(model.cube(c.level, model.position(c)) == c);

    Vec<double> rows(model.leaf_count());
    for (Eigen::Index i = 0; i < rows.size(); ++i) rows[i] = static_cast<double>(i);
    CHECK(model.from_tree(model.to_tree(rows)) == rows);
    // Leaves of a cube are contiguous in tree order.
    const oracle::Grid g{n, 3};
    for (const CubeId& c : cubes) {
      const Vec<double> tree = model.to_tree(rows);
      const std::int64_t width = model.leaves_per_cube(c.level);
      for (std::int64_t t = 0; t < width; ++t) {
        CHECK(oracle::inside(g, c, static_cast<std::int64_t>(tree[model.position(c) * width + t])));
      }
    }
  }
}

TEST_CASE("aggregate on small examples") {
  const DyadicModel m1(1, 1);
  CHECK(aggregate(m1, vec({1, 3})).average[0][0] == 2.0);
  const DyadicModel m2(1, 2);
  const auto agg = aggregate(m2, vec({1, 2, 3, 4}));
  CHECK(agg.average[1][0] == 1.5);
  CHECK(agg.integral[0][0] == 2.5);
  const auto constant = aggregate(m2, Vec<double>(Vec<double>::Constant(4, 7.0)));
  for (const auto& level : constant.average) CHECK((level.array() == 7.0).all());
}

TEST_CASE("aggregate matches the brute-force oracle exactly") {
  CounterRng rng(3, 0);
  for (int n = 1; n <= 3; ++n) {
    for (int K = 0; K * n <= 8; ++K) {
      const DyadicModel model(n, K);
      const oracle::Grid g{n, K};
      const Vec<Rational> f = random_rational(model.leaf_count(), rng);
      const auto agg = aggregate(model, f);
      for (const CubeId& c : model.cubes()) {
        CHECK(agg.integral_of(model, c) == oracle::integral(g, f, c));
        CHECK(agg.average[c.level][model.position(c)] == oracle::average(g, f, c));
      }
    }
  }
}

TEST_CASE("conditional expectation") {
  const DyadicModel m1(1, 1);
  CHECK(cond_expectation(m1, vec({1, 3}), 0) == vec({2, 2}));
  CHECK(cond_expectation(m1, vec({1, 3}), 1) == vec({1, 3}));
  const DyadicModel m2(1, 2);
  const Vec<double> f = vec({1, 2, 3, 4});
  CHECK(cond_expectation(m2, cond_expectation(m2, f, 1), 0) == Vec<double>::Constant(4, 2.5));
  CHECK_THROWS_AS(cond_expectation(m2, f, 3), std::out_of_range);

  // Tower property, exactly, in two dimensions.
  CounterRng rng(5, 0);
  const DyadicModel m(2, 3);
  const Vec<Rational> g = random_rational(m.leaf_count(), rng);
  for (int j = 0; j <= 3; ++j) {
    for (int k = 0; k <= 3; ++k) {
      CHECK(cond_expectation(m, cond_expectation(m, g, k), j) == cond_expectation(m, g, std::min(j, k)));
    }
  }
}

TEST_CASE("weighted measure") {
  const DyadicModel m(1, 1);
  CHECK(weighted_measure(m, vec({1, 4}), CubeId{1, {1}}) == 2.0);
  CHECK(weighted_measure(m, vec({1, 4}), CubeId{0, {0}}) == 2.5);
  const DyadicModel m3(2, 2);
  CHECK(weighted_measure(m3, Vec<double>(Vec<double>::Ones(16)), CubeId{1, {1, 0}}) == 0.25);
  CHECK_THROWS(weighted_measure(m, vec({1, 4}), CubeId{2, {0}}));
}

TEST_CASE("leaf functions are validated") {
  const DyadicModel m(1, 2);
  CHECK_THROWS_AS(aggregate(m, vec({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(aggregate(m, vec({1, 2, -1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(aggregate(m, vec({1, 2, NAN, 0})), std::invalid_argument);
}
