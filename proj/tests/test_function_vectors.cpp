#include "dyadlab/function_vectors.hpp"
#include "dyadlab/operators.hpp"

#include <doctest.h>

#include <cmath>

using namespace dyadlab;

namespace {

Vec<double> vec(std::initializer_list<double> xs) {
  Vec<double> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

const ExponentSequence kTwoTwo({2, 2});

}  // namespace

TEST_CASE("tail templates must be indicators") {
  const DyadicModel m(1, 1);
  const ExponentSequence seq({2, 3}, GeometricTail{1, 2, 3});
  CHECK_NOTHROW(make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, vec({1, 1}), seq));
  CHECK_NOTHROW(make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, vec({1, 0}), seq));
  CHECK_THROWS_WITH(make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, vec({2, 1}), seq),
                    doctest::Contains("diverges"));
  CHECK_THROWS(make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, vec({0.5, 1}), seq));
  CHECK_THROWS(make_function_vector<double>(m, {vec({1, 1})}, seq));
  CHECK_THROWS(make_function_vector<double>(m, {vec({1, -1}), vec({1, 1})}, seq));
}

TEST_CASE("infinite pointwise product") {
  const std::vector<double> head{2, 3};
  CHECK(infinite_pointwise_product<double>(head, 1.0) == 6.0);
  CHECK(infinite_pointwise_product<double>(head, 0.5) == 0.0);
  CHECK(infinite_pointwise_product<double>({}, 1.0) == 1.0);
  CHECK_THROWS(infinite_pointwise_product<double>(head, 1.5));

  const DyadicModel m(1, 1);
  const auto F = make_function_vector<double>(m, {vec({2, 2}), vec({3, 3})}, vec({1, 0}),
                                      ExponentSequence({2, 3}, GeometricTail{1, 2, 3}));
  CHECK(pointwise_product(F) == vec({6, 0}));
  // Without a tail the template is irrelevant.
  const auto G = make_function_vector<double>(m, {vec({2, 2}), vec({3, 3})}, vec({1, 0}), ExponentSequence({2, 3}));
  CHECK(pointwise_product(G) == vec({6, 6}));
}

TEST_CASE("product norm") {
  const DyadicModel m(1, 1);
  const auto F = make_function_vector<double>(m, {vec({1, 3}), vec({2, 0})}, kTwoTwo);
  CHECK(product_norm(m, F) == doctest::Approx(3.1622776601683795).epsilon(1e-15));
  const auto ones = make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, kTwoTwo);
  CHECK(product_norm(m, ones) == doctest::Approx(1.0));

  // |E| = 1/2 with s_N = 1/4 contributes 2^{-1/4}.
  const ExponentSequence tailed({2, 2}, GeometricTail{4, 2, 3});
  CHECK(tailed.tail_inverse_sum() == Rational(1, 16));
  const ExponentSequence quarter({4, 2}, GeometricTail{1, 2, 3});
  CHECK(quarter.tail_inverse_sum() == Rational(1, 4));
  const auto half = make_function_vector<double>(m, {vec({1, 1}), vec({1, 1})}, vec({1, 0}), quarter);
  CHECK(product_norm(m, half) == doctest::Approx(0.8408964152537145).epsilon(1e-15));

  // Weighted norms.
  const auto W = WeightVector<double>::from_omegas(m, kTwoTwo, vec({1, 1}), {vec({1, 4}), vec({1, 1})});
  CHECK(product_norm(m, F, W) == doctest::Approx(std::sqrt(0.5 * (1 + 36)) * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("dual weights") {
  const DyadicModel m(1, 1);
  const auto W = WeightVector<double>::from_omegas(m, ExponentSequence({2, 3}), vec({1, 1}), {vec({1, 4}), vec({1, 4})});
  CHECK(W.sigmas()[0] == vec({1, 0.25}));
  CHECK(W.sigmas()[1] == vec({1, 0.5}));

  const auto E = WeightVector<Rational>::from_omegas(m, ExponentSequence({Rational(3, 2)}),
                                                    Vec<Rational>::Ones(2), {Vec<Rational>::Constant(2, 4)});
  CHECK(E.sigmas()[0][0] == Rational(1, 16));
  CHECK_THROWS_WITH(WeightVector<Rational>::from_omegas(m, ExponentSequence({3}), Vec<Rational>::Ones(2),
                                                       {Vec<Rational>::Constant(2, 2)}),
                    doctest::Contains("irrational"));

  const auto S = WeightVector<double>::from_sigmas(m, ExponentSequence({3}), vec({1, 1}), {vec({1, 0.5})});
  CHECK(S.omegas()[0][1] == doctest::Approx(4.0));
  CHECK_THROWS(WeightVector<double>::from_omegas(m, kTwoTwo, vec({1, 0}), {vec({1, 1}), vec({1, 1})}));
}
