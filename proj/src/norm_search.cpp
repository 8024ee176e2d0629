#include "dyadlab/norm_search.hpp"

#include "dyadlab/parallel.hpp"
#include "dyadlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dyadlab {

const char* to_string(OperatorKind kind) noexcept { return kind == OperatorKind::weak ? "weak" : "strong"; }

double weak_quantity(const DyadicModel& model, const LeafFunction<double>& m, const LeafFunction<double>& v,
                     double p, double lambda, bool strict) {
  double mass = 0.0;
  for (Eigen::Index x = 0; x < m.size(); ++x) {
    if (strict ? m[x] > lambda : m[x] >= lambda) mass += v[x];
  }
  return lambda * std::pow(mass * model.leaf_measure<double>(), 1.0 / p);
}

double weak_sup(const DyadicModel& model, const LeafFunction<double>& m, const LeafFunction<double>& v, double p) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return m[a] > m[b]; });
  double best = 0.0, mass = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const double lambda = m[order[j]];
    if (!(lambda > 0)) break;
    mass += v[order[j]];
    // Evaluate once per distinct value, after all ties have been added.
    if (j + 1 < order.size() && m[order[j + 1]] == lambda) continue;
    best = std::max(best, lambda * std::pow(mass * model.leaf_measure<double>(), 1.0 / p));
  }
  return best;
}

double rayleigh_ratio(const DyadicModel& model, const OperatorSpec& spec, const FunctionVector<double>& F) {
  const double den = product_norm(model, F, spec.weights);
  if (!(den > 0)) return 0.0;
  const double p = spec.weights.exponents().p();
  const LeafFunction<double> m = product_maximal(model, F);
  const double num = spec.kind == OperatorKind::strong ? lp_norm(model, m, p, &spec.weights.v())
                                                       : weak_sup(model, m, spec.weights.v(), p);
  return num / den;
}

ConstantReport testing_family_weak(const DyadicModel& model, const WeightVector<double>& W) {
  const OperatorSpec spec{OperatorKind::weak, W};
  LevelValues<double> values(model.depth() + 1);
  for (int k = 0; k <= model.depth(); ++k) values[k].resize(model.cubes_at(k));
  model.for_each_cube([&](int k, std::int64_t pos) {
    values[k][pos] = rayleigh_ratio(model, spec, testing_vector(model, W, model.cube(k, pos)));
  });
  return max_over_cubes(model, "testing_family_weak", values);
}

ConstantReport testing_family_weak(const DyadicModel& model, const WeightVector<Rational>& W) {
  const ExponentSequence& seq = W.exponents();
  const Rational leaf = model.leaf_measure<Rational>();
  std::vector<PowerProduct> values;
  values.reserve(static_cast<std::size_t>(model.cube_count()));
  model.for_each_cube([&](int k, std::int64_t pos) {
    const CubeId cube = model.cube(k, pos);
    const LeafFunction<Rational> m = product_maximal(model, testing_vector(model, W, cube));
    PowerProduct scale;
    for (std::size_t i = 0; i < W.head_size(); ++i) {
      scale.multiply(weighted_measure(model, W.sigmas()[i], cube), -Rational(1) / seq.head()[i]);
    }
    scale.multiply(model.cube_measure<Rational>(k), -seq.tail_inverse_sum());

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return m[b] < m[a]; });
    std::optional<PowerProduct> best;
    Rational mass(0);
    for (std::size_t j = 0; j < order.size(); ++j) {
      const Rational& lambda = m[order[j]];
      if (!(lambda > 0)) break;
      mass += W.v()[order[j]];
      if (j + 1 < order.size() && m[order[j + 1]] == lambda) continue;
      PowerProduct candidate = scale;
      candidate.multiply(lambda).multiply(mass * leaf, seq.inverse_p());
      if (!best || *best < candidate) best = std::move(candidate);
    }
    values.push_back(best ? *best : PowerProduct(Rational(0)));
  });
  return max_over_cubes(model, "testing_family_weak", values);
}

namespace {

struct RestartResult {
  double ratio = 0.0;
  FunctionVector<double> witness;
  std::int64_t evaluations = 0;
};

constexpr double kRandomSpread = 2.0;
constexpr double kPerturbSpread = 0.5;

/// Multiplicative coordinate ascent: scale one leaf value of one head
/// coordinate by step or 1/step, keeping the move when the ratio does not
/// drop. The step is refined (square-rooted) after a sweep without gain.
void ascend(const DyadicModel& model, const OperatorSpec& spec, int sweeps, RestartResult& r) {
  double step = 2.0;
  for (int sweep = 0; sweep < sweeps && step > 1.0 + 1e-3; ++sweep) {
    bool improved = false;
    for (auto& f : r.witness.head) {
      for (Eigen::Index x = 0; x < f.size(); ++x) {
        if (f[x] == 0) continue;
        for (const double factor : {step, 1.0 / step}) {
          const double old = f[x];
          f[x] = old * factor;
          const double ratio = rayleigh_ratio(model, spec, r.witness);
          ++r.evaluations;
          if (ratio >= r.ratio) {
            improved = improved || ratio > r.ratio;
            r.ratio = ratio;
            break;
          }
          f[x] = old;
        }
      }
    }
    if (!improved) step = std::sqrt(step);
  }
}

}  // namespace

NormCertificate estimate_norm(const DyadicModel& model, const OperatorSpec& spec, const SearchBudget& budget,
                              std::uint64_t seed, unsigned threads) {
  const WeightVector<double>& W = spec.weights;
  NormCertificate out{spec, -1.0, {}, "testing_family", 0, seed, std::nullopt};
  for (const CubeId& cube : model.cubes()) {
    FunctionVector<double> F = testing_vector(model, W, cube);
    const double ratio = rayleigh_ratio(model, spec, F);
    ++out.iterations;
    if (ratio > out.lower_bound) {
      out.lower_bound = ratio;
      out.witness = std::move(F);
      out.testing_cube = cube;
    }
  }

  const std::size_t restarts = static_cast<std::size_t>(std::max(0, budget.restarts));
  std::vector<RestartResult> results(restarts);
  const FunctionVector<double> seed_witness = out.witness;
  parallel_for(restarts, threads, [&](std::size_t r) {
    CounterRng rng(derive_seed(seed, tag_of("estimate_norm")), r);
    RestartResult& res = results[r];
    if (r % 2 == 0) {
      res.witness = seed_witness;
      for (auto& f : res.witness.head) {
        for (Eigen::Index x = 0; x < f.size(); ++x) f[x] *= std::exp(rng.uniform(-kPerturbSpread, kPerturbSpread));
      }
    } else {
      // Random values, optionally concentrated on one random cube.
      Mask support = Mask::Constant(model.leaf_count(), true);
      if (rng.bernoulli(0.5)) {
        const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(model.depth()) + 1));
        support = cube_mask(model, model.cube(level, static_cast<std::int64_t>(
                                                        rng.below(static_cast<std::uint64_t>(model.cubes_at(level))))));
      }
      std::vector<LeafFunction<double>> head;
      for (std::size_t i = 0; i < W.head_size(); ++i) {
        LeafFunction<double> f(model.leaf_count());
        for (Eigen::Index x = 0; x < f.size(); ++x) {
          const double value = std::exp(rng.uniform(-kRandomSpread, kRandomSpread));
          f[x] = support[x] ? value : 0.0;
        }
        head.push_back(std::move(f));
      }
      res.witness = make_function_vector(model, std::move(head), support, W.exponents());
    }
    res.ratio = rayleigh_ratio(model, spec, res.witness);
    res.evaluations = 1;
    ascend(model, spec, budget.sweeps, res);
  });

  for (std::size_t r = 0; r < restarts; ++r) {
    out.iterations += results[r].evaluations;
    if (results[r].ratio > out.lower_bound) {
      out.lower_bound = results[r].ratio;
      out.witness = std::move(results[r].witness);
      out.strategy = r % 2 == 0 ? "perturbation" : "random_restart";
      out.testing_cube.reset();
    }
  }
  return out;
}

}  // namespace dyadlab
