#include "dyadlab/weight_constants.hpp"

#include <cmath>

namespace dyadlab {

int compare(const ExactValue& a, const ExactValue& b) {
  // x^da = a', y^db = b'; compare x^L and y^L for L = lcm(da, db).
  const Integer l = lcm(a.power, b.power);
  const Rational x = pow_int(a.value_power, Integer(l / a.power).convert_to<std::int64_t>());
  const Rational y = pow_int(b.value_power, Integer(l / b.power).convert_to<std::int64_t>());
  return x < y ? -1 : (y < x ? 1 : 0);
}

ConstantReport max_over_cubes(const DyadicModel& model, std::string name, const LevelValues<double>& values) {
  ConstantReport out{std::move(name), -std::numeric_limits<double>::infinity(), std::nullopt, {}, "float", {}};
  out.per_cube_values.reserve(static_cast<std::size_t>(model.cube_count()));
  model.for_each_cube([&](int k, std::int64_t pos) {
    const double v = values[k][pos];
    CubeId cube = model.cube(k, pos);
    if (v > out.value) {
      out.value = v;
      out.attaining_cube = cube;
    }
    out.per_cube_values.emplace_back(std::move(cube), v);
  });
  return out;
}

ConstantReport max_over_cubes(const DyadicModel& model, std::string name, const std::vector<PowerProduct>& values) {
  if (values.size() != static_cast<std::size_t>(model.cube_count())) {
    throw std::invalid_argument("one value per cube is required");
  }
  ConstantReport out{std::move(name), 0.0, std::nullopt, {}, "exact", {}};
  Integer d = 1;
  for (const auto& value : values) d = lcm(d, value.common_denominator());
  std::optional<Rational> best;
  std::size_t idx = 0;
  model.for_each_cube([&](int k, std::int64_t pos) {
    const PowerProduct& value = values[idx++];
    const Rational raised = value.raised(d);
    CubeId cube = model.cube(k, pos);
    if (!best || *best < raised) {
      best = raised;
      out.value = value.to_double();
      out.attaining_cube = cube;
    }
    out.per_cube_values.emplace_back(std::move(cube), value.to_double());
  });
  out.exact = ExactValue{d, *best};
  return out;
}

namespace {

ConstantReport select_max(const DyadicModel& model, std::string name, const LevelValues<double>& values) {
  return max_over_cubes(model, std::move(name), values);
}

template <typename PerCube>
ConstantReport select_max_exact(const DyadicModel& model, std::string name, PerCube&& per_cube) {
  std::vector<PowerProduct> values;
  values.reserve(static_cast<std::size_t>(model.cube_count()));
  model.for_each_cube([&](int k, std::int64_t pos) { values.push_back(per_cube(k, pos)); });
  return max_over_cubes(model, std::move(name), values);
}

template <typename Scalar>
LevelValues<Scalar> averages_of(const DyadicModel& model, const LeafFunction<Scalar>& f) {
  return level_averages(model, model.to_tree(f));
}

// prod_i avg_B sigma_i for every cube, no tail factor (tail weights are 1).
template <typename Scalar>
LevelValues<Scalar> sigma_products(const DyadicModel& model, const WeightVector<Scalar>& W) {
  LevelValues<Scalar> out(model.depth() + 1);
  for (int k = 0; k <= model.depth(); ++k) out[k] = Vec<Scalar>::Ones(model.cubes_at(k));
  for (const auto& sigma : W.sigmas()) {
    const LevelValues<Scalar> avg = averages_of(model, sigma);
    for (int k = 0; k <= model.depth(); ++k) out[k] = out[k].cwiseProduct(avg[k]);
  }
  return out;
}

template <typename Scalar, typename PowerFn>
LevelValues<Scalar> testing_integrals_impl(const DyadicModel& model, const WeightVector<Scalar>& W,
                                           PowerFn&& power) {
  const LevelValues<Scalar> products = sigma_products(model, W);
  const Vec<Scalar> v_tree = model.to_tree(W.v());
  const Scalar leaf_measure = model.leaf_measure<Scalar>();
  LevelValues<Scalar> out(model.depth() + 1);
  for (int k = 0; k <= model.depth(); ++k) {
    out[k].resize(model.cubes_at(k));
    for (std::int64_t c = 0; c < model.cubes_at(k); ++c) {
      // M_d(sigma chi_B) vanishes off B; on B only subcubes of B contribute.
      Vec<Scalar> running = products[k].segment(c, 1);
      for (int j = k + 1; j <= model.depth(); ++j) {
        const std::int64_t span = model.cubes_at(j - k);
        running = detail::cwise_max(broadcast(model, running, j - 1, j), Vec<Scalar>(products[j].segment(c * span, span)));
      }
      const std::int64_t width = model.leaves_per_cube(k);
      Scalar sum(0);
      for (std::int64_t x = 0; x < width; ++x) sum += power(running[x]) * v_tree[c * width + x];
      out[k][c] = sum * leaf_measure;
    }
  }
  return out;
}

}  // namespace

ConstantReport ap_product_constant(const DyadicModel& model, const WeightVector<double>& W) {
  const ExponentSequence& seq = W.exponents();
  const double inv_p = to_double(seq.inverse_p());
  LevelValues<double> values = averages_of(model, W.v());
  for (auto& level : values) level = level.array().pow(inv_p).matrix();
  for (std::size_t i = 0; i < W.head_size(); ++i) {
    const double inv_conj = 1.0 - 1.0 / to_double(seq.head()[i]);
    const LevelValues<double> avg = averages_of(model, W.sigmas()[i]);
    for (int k = 0; k <= model.depth(); ++k) values[k].array() *= avg[k].array().pow(inv_conj);
  }
  return select_max(model, "ap_product", values);
}

ConstantReport ap_product_constant(const DyadicModel& model, const WeightVector<Rational>& W) {
  const ExponentSequence& seq = W.exponents();
  const LevelValues<Rational> v_avg = averages_of(model, W.v());
  std::vector<LevelValues<Rational>> sigma_avg;
  for (const auto& s : W.sigmas()) sigma_avg.push_back(averages_of(model, s));
  return select_max_exact(model, "ap_product", [&](int k, std::int64_t pos) {
    PowerProduct value(v_avg[k][pos], seq.inverse_p());
    for (std::size_t i = 0; i < sigma_avg.size(); ++i) {
      value.multiply(sigma_avg[i][k][pos], Rational(1) - Rational(1) / seq.head()[i]);
    }
    return value;
  });
}

ConstantReport classical_ap(const DyadicModel& model, const LeafFunction<double>& omega, const Rational& p) {
  if (p <= 1) throw std::invalid_argument("exponent must exceed 1");
  validate_weight(model, omega, "weight omega");
  const LevelValues<double> w = averages_of(model, omega);
  const LevelValues<double> s = averages_of(model, dual_weight(omega, p));
  const double pm1 = to_double(p) - 1.0;
  LevelValues<double> values(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) values[k] = (w[k].array() * s[k].array().pow(pm1)).matrix();
  return select_max(model, "classical_ap", values);
}

ConstantReport classical_ap(const DyadicModel& model, const LeafFunction<Rational>& omega, const Rational& p) {
  if (p <= 1) throw std::invalid_argument("exponent must exceed 1");
  validate_weight(model, omega, "weight omega");
  const LevelValues<Rational> w = averages_of(model, omega);
  const LevelValues<Rational> s = averages_of(model, dual_weight(omega, p));
  return select_max_exact(model, "classical_ap", [&](int k, std::int64_t pos) {
    return PowerProduct(w[k][pos]).multiply(s[k][pos], p - 1);
  });
}

double a_star_constant(std::span<const std::pair<double, double>> heads) {
  double out = 1.0;
  for (const auto& [constant, p] : heads) out *= std::pow(constant, 1.0 / p);
  return out;
}

double a_star_constant(const DyadicModel& model, const WeightVector<double>& W) {
  std::vector<std::pair<double, double>> heads;
  for (std::size_t i = 0; i < W.head_size(); ++i) {
    const Rational& p = W.exponents().head()[i];
    heads.emplace_back(classical_ap(model, W.omegas()[i], p).value, to_double(p));
  }
  return a_star_constant(heads);
}

namespace {

LeafFunction<double> weighted_geometric_product(const std::vector<LeafFunction<double>>& factors,
                                                const ExponentSequence& seq, double scale, Eigen::Index size) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Ones(size);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    out *= factors[i].array().pow(scale / to_double(seq.head()[i]));
  }
  return out.matrix();
}

}  // namespace

LeafFunction<double> nu_sigma(const WeightVector<double>& W) {
  return weighted_geometric_product(W.sigmas(), W.exponents(), W.exponents().p(), W.v().size());
}

LeafFunction<double> omega_product_one_over_p(const WeightVector<double>& W) {
  return weighted_geometric_product(W.omegas(), W.exponents(), 1.0, W.v().size());
}

LeafFunction<double> omega_product_p_over_p(const WeightVector<double>& W) {
  return weighted_geometric_product(W.omegas(), W.exponents(), W.exponents().p(), W.v().size());
}

RhReport rh_constant(const DyadicModel& model, const WeightVector<double>& W) {
  const ExponentSequence& seq = W.exponents();
  const double p = seq.p();
  LeafFunction<double> nu = nu_sigma(W);
  LevelValues<double> values = averages_of(model, nu);
  for (auto& level : values) level = level.cwiseInverse();
  for (std::size_t i = 0; i < W.head_size(); ++i) {
    const LevelValues<double> avg = averages_of(model, W.sigmas()[i]);
    const double e = p / to_double(seq.head()[i]);
    for (int k = 0; k <= model.depth(); ++k) values[k].array() *= avg[k].array().pow(e);
  }
  return {select_max(model, "rh", values), std::move(nu)};
}

LevelValues<double> testing_integrals(const DyadicModel& model, const WeightVector<double>& W) {
  const double p = W.exponents().p();
  return testing_integrals_impl(model, W, [p](double x) { return std::pow(x, p); });
}

LevelValues<Rational> testing_integrals(const DyadicModel& model, const WeightVector<Rational>& W) {
  const Rational p = W.exponents().p_exact();
  if (boost::multiprecision::denominator(p) != 1) {
    throw std::invalid_argument("exact testing integrals need an integer p (got " + to_string(p) + ")");
  }
  const std::int64_t e = boost::multiprecision::numerator(p).convert_to<std::int64_t>();
  return testing_integrals_impl(model, W, [e](const Rational& x) { return pow_int(x, e); });
}

ConstantReport sp_testing_constant(const DyadicModel& model, const WeightVector<double>& W) {
  const ExponentSequence& seq = W.exponents();
  const double inv_p = to_double(seq.inverse_p());
  const double s_tail = to_double(seq.tail_inverse_sum());
  LevelValues<double> values = testing_integrals(model, W);
  for (int k = 0; k <= model.depth(); ++k) {
    values[k] = values[k].array().pow(inv_p).matrix();
    values[k] /= std::pow(model.cube_measure<double>(k), s_tail);
  }
  for (std::size_t i = 0; i < W.head_size(); ++i) {
    const double inv_pi = 1.0 / to_double(seq.head()[i]);
    const CubeAggregate<double> mass = aggregate(model, W.sigmas()[i]);
    for (int k = 0; k <= model.depth(); ++k) values[k].array() /= mass.integral[k].array().pow(inv_pi);
  }
  return select_max(model, "sp_testing", values);
}

ConstantReport sp_testing_constant(const DyadicModel& model, const WeightVector<Rational>& W) {
  const ExponentSequence& seq = W.exponents();
  const LevelValues<Rational> integrals = testing_integrals(model, W);
  std::vector<CubeAggregate<Rational>> mass;
  for (const auto& s : W.sigmas()) mass.push_back(aggregate(model, s));
  return select_max_exact(model, "sp_testing", [&](int k, std::int64_t pos) {
    PowerProduct value(integrals[k][pos], seq.inverse_p());
    for (std::size_t i = 0; i < mass.size(); ++i) {
      value.multiply(mass[i].integral[k][pos], -Rational(1) / seq.head()[i]);
    }
    value.multiply(model.cube_measure<Rational>(k), -seq.tail_inverse_sum());
    return value;
  });
}

}  // namespace dyadlab
