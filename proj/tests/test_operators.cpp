#include "dyadlab/operators.hpp"
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

Vec<Rational> random_rational(std::int64_t size, CounterRng& rng, bool positive = false) {
  Vec<Rational> v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const long num = static_cast<long>(rng.below(7)) + (positive ? 1 : 0);
    v[i] = rng.bernoulli(0.2) && !positive ? Rational(0) : Rational(num, 1 + static_cast<long>(rng.below(5)));
  }
  return v;
}

Mask random_mask(const DyadicModel& model, CounterRng& rng) {
  // A cube's leaves, so that some cubes carry the full tail factor.
  const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(model.depth()) + 1));
  CubeId cube{level, std::vector<std::int64_t>(model.dimension())};
  for (auto& i : cube.index) i = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << level));
  return cube_mask(model, cube);
}

}  // namespace

TEST_CASE("maximal function examples") {
  const DyadicModel m(1, 1);
  CHECK(maximal(m, vec({1, 3})) == vec({2, 3}));
  CHECK(maximal(m, vec({5, 5})) == vec({5, 5}));
  CHECK(weighted_maximal(m, vec({3, 1}), vec({1, 3})) == vec({3, 1.5}));
  const DyadicModel m2(1, 2);
  CHECK(maximal(m2, vec({4, 0, 0, 0})) == vec({4, 2, 1, 1}));
}

TEST_CASE("product maximal examples") {
  const DyadicModel m(1, 1);
  const ExponentSequence two_two({2, 2});
  CHECK(product_maximal(m, make_function_vector<double>(m, {vec({1, 3}), vec({2, 0})}, two_two)) == vec({2, 2}));
  CHECK(product_maximal(m, make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, two_two)) == vec({1, 1}));

  const ExponentSequence tailed({2}, GeometricTail{1, 2, 2});
  CHECK(product_maximal(m, make_function_vector<double>(m, {vec({1, 3})}, vec({1, 0}), tailed)) == vec({1, 0}));
}

TEST_CASE("superlevel maximal cubes") {
  const DyadicModel m(1, 1);
  const auto F = make_function_vector<double>(m, {vec({1, 3})}, ExponentSequence({2}));
  CHECK(superlevel_maximal_cubes(m, F, 2.5, true) == std::vector<CubeId>{CubeId{1, {1}}});
  CHECK(superlevel_maximal_cubes(m, F, 0.5, true) == std::vector<CubeId>{CubeId{0, {0}}});
  CHECK(superlevel_maximal_cubes(m, F, 10.0, true).empty());
  CHECK(superlevel_maximal_cubes(m, F, 2.0, true) == std::vector<CubeId>{CubeId{1, {1}}});
  CHECK(superlevel_maximal_cubes(m, F, 2.0, false) == std::vector<CubeId>{CubeId{0, {0}}});
}

TEST_CASE("superlevel cubes are disjoint and cover the superlevel set") {
  CounterRng rng(17, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(2));
    const DyadicModel m(n, n == 1 ? 5 : 3);
    const ExponentSequence seq({2, 3}, GeometricTail{1, 2, 3});
    const auto F = make_function_vector<double>(m, {to_double(random_rational(m.leaf_count(), rng)),
                                            to_double(random_rational(m.leaf_count(), rng))},
                                        random_mask(m, rng), seq);
    const Vec<double> M = product_maximal(m, F);
    const double lambda = rng.uniform(0.1, 3.0);
    for (bool strict : {true, false}) {
      Mask covered = Mask::Constant(m.leaf_count(), false);
      for (const CubeId& c : superlevel_maximal_cubes(m, F, lambda, strict)) {
        const Mask b = cube_mask(m, c);
        CHECK(!(covered && b).any());
        covered = covered || b;
      }
      const Mask level = strict ? (M.array() > lambda).eval() : (M.array() >= lambda).eval();
      CHECK((covered == level).all());
    }
  }
}

TEST_CASE("stopping decomposition") {
  const DyadicModel m(1, 1);
  const auto F = make_function_vector<double>(m, {vec({1, 3})}, ExponentSequence({2}));
  const auto d = stopping_decomposition(m, F, 2.0);
  REQUIRE(d.bands.size() == 2);
  CHECK(d.bands[0].k == 0);
  CHECK(d.bands[0].set[0]);
  CHECK(d.bands[1].k == 1);
  CHECK(d.bands[1].set[1]);

  const auto ones = make_function_vector<double>(m, {vec({1, 1})}, ExponentSequence({2}));
  const auto e = stopping_decomposition(m, ones, 2.0);
  REQUIRE(e.bands.size() == 1);
  CHECK(e.bands[0].k == -1);

  // Bands partition {M > 0}; pieces partition each band.
  CounterRng rng(23, 0);
  const DyadicModel big(2, 3);
  const auto G = make_function_vector<double>(big, {to_double(random_rational(big.leaf_count(), rng))}, ExponentSequence({2}));
  const Vec<double> M = product_maximal(big, G);
  const auto s = stopping_decomposition(big, G, 1.5);
  Mask all = Mask::Constant(big.leaf_count(), false);
  for (const auto& band : s.bands) {
    CHECK(!(all && band.set).any());
    all = all || band.set;
    Mask pieces = Mask::Constant(big.leaf_count(), false);
    for (const Mask& piece : band.pieces) {
      CHECK(!(pieces && piece).any());
      pieces = pieces || piece;
    }
    CHECK((pieces == band.set).all());
  }
  CHECK((all == (M.array() > 0)).all());
}

TEST_CASE("operators match brute-force oracles exactly on all models up to 2^8 leaves") {
  CounterRng rng(29, 0);
  for (int n = 1; n <= 4; ++n) {
    for (int K = 0; K * n <= 8; ++K) {
      const DyadicModel m(n, K);
      const oracle::Grid g{n, K};
      const Vec<Rational> f = random_rational(m.leaf_count(), rng);
      const Vec<Rational> mu = random_rational(m.leaf_count(), rng, true);
      CHECK(maximal(m, f) == oracle::maximal(g, f));
      CHECK(weighted_maximal(m, f, mu) == oracle::weighted_maximal(g, f, mu));

      const ExponentSequence seq({2, 3, Rational(3, 2)}, GeometricTail{1, 2, 4});
      const auto F = make_function_vector<Rational>(m, {f, random_rational(m.leaf_count(), rng), random_rational(m.leaf_count(), rng)},
                                          random_mask(m, rng), seq);
      for (int floor = 0; floor <= K; ++floor) {
        CHECK(product_maximal(m, F, {nullptr, floor}) == oracle::product_maximal(g, F, floor));
      }
    }
  }
}
