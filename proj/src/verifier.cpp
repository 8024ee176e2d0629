#include "dyadlab/verifier.hpp"

#include "dyadlab/parallel.hpp"
#include "dyadlab/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyadlab {

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informative || c.pass; });
}

const char* to_string(VConvention c) noexcept { return c == VConvention::p_over_p ? "p_over_p" : "one_over_p"; }

VConvention parse_v_convention(std::string_view text) {
  if (text == "p_over_p") return VConvention::p_over_p;
  if (text == "one_over_p") return VConvention::one_over_p;
  throw std::invalid_argument("unknown v convention '" + std::string(text) + "' (expected p_over_p or one_over_p)");
}

LeafFunction<double> random_weight(const DyadicModel& model, CounterRng& rng, double spread) {
  LeafFunction<double> w(model.leaf_count());
  for (Eigen::Index x = 0; x < w.size(); ++x) w[x] = std::exp(rng.uniform(-spread, spread));
  return w;
}

namespace {

CubeId random_cube(const DyadicModel& model, CounterRng& rng) {
  const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(model.depth()) + 1));
  const auto pos = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(model.cubes_at(level))));
  return model.cube(level, pos);
}

}  // namespace

FunctionVector<double> random_function_vector(const DyadicModel& model, const ExponentSequence& seq,
                                              CounterRng& rng, double spread) {
  const std::uint64_t shape = rng.below(4);
  Mask head_support = Mask::Constant(model.leaf_count(), true);
  Mask tail = Mask::Constant(model.leaf_count(), true);
  if (shape == 2) {
    head_support = cube_mask(model, random_cube(model, rng));
    tail = head_support;
  } else if (shape == 3) {
    tail = cube_mask(model, random_cube(model, rng));
  }
  std::vector<LeafFunction<double>> head;
  for (std::size_t i = 0; i < seq.head_size(); ++i) {
    LeafFunction<double> f(model.leaf_count());
    for (Eigen::Index x = 0; x < f.size(); ++x) {
      const double value = std::exp(rng.uniform(-spread, spread));
      const bool zero = !head_support[x] || (shape == 1 && rng.bernoulli(0.5));
      f[x] = zero ? 0.0 : value;
    }
    head.push_back(std::move(f));
  }
  return make_function_vector(model, std::move(head), std::move(tail), seq);
}

CarlesonFamily<double> random_carleson_family(const DyadicModel& model, CounterRng& rng) {
  CarlesonFamily<double> a(model);
  model.for_each_cube([&](int k, std::int64_t pos) {
    if (rng.bernoulli(0.5)) a.set(model, model.cube(k, pos), rng.uniform(0.0, 2.0) * model.cube_measure<double>(k));
  });
  return a;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool holds(double lhs, double rhs, double tol) { return lhs <= rhs * (1.0 + tol) || lhs <= rhs; }

double severity(double lhs, double rhs) {
  if (rhs > 0) return lhs / rhs;
  return lhs > 0 ? kInf : 0.0;
}

/// Worst case of one inequality over many draws.
struct Worst {
  double lhs = 0.0;
  double rhs = 0.0;
  double severity = -1.0;
  std::int64_t count = 0;
  std::int64_t violations = 0;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::optional<CubeId> cube;

  void add(double l, double r, double tol, double lam = std::numeric_limits<double>::quiet_NaN(),
           const std::optional<CubeId>& at = std::nullopt) {
    ++count;
    if (!holds(l, r, tol)) ++violations;
    const double s = dyadlab::severity(l, r);
    if (s > severity) {
      severity = s;
      lhs = l;
      rhs = r;
      lambda = lam;
      cube = at;
    }
  }
};

/// Per-check aggregation across samples in sample order.
class Aggregate {
 public:
  Aggregate(std::string description, bool informative = false)
      : description_(std::move(description)), informative_(informative) {}

  void merge(const Worst& w, std::int64_t sample) {
    samples_ += w.count;
    violations_ += w.violations;
    if (w.count > 0 && w.severity > worst_.severity) {
      worst_ = w;
      worst_sample_ = sample;
    }
  }

  Check check() const {
    Check c{description_, "<=", worst_.lhs, worst_.rhs, worst_.rhs - worst_.lhs, violations_ == 0,
            informative_, samples_, violations_};
    return c;
  }

  const std::string& description() const { return description_; }
  std::optional<std::int64_t> worst_sample() const { return worst_sample_; }
  const Worst& worst() const { return worst_; }

 private:
  std::string description_;
  bool informative_;
  std::int64_t samples_ = 0;
  std::int64_t violations_ = 0;
  Worst worst_;
  std::optional<std::int64_t> worst_sample_;
};

Check single(std::string description, double lhs, double rhs, double tol, bool informative = false) {
  return {std::move(description), "<=", lhs, rhs, rhs - lhs, holds(lhs, rhs, tol), informative, 1,
          holds(lhs, rhs, tol) ? 0 : 1};
}

Check equality(std::string description, double lhs, double rhs, double tol, bool informative = false) {
  const bool ok = std::abs(lhs - rhs) <= tol * std::max(std::abs(lhs), std::abs(rhs)) || lhs == rhs;
  return {std::move(description), "==", lhs, rhs, rhs - lhs, ok, informative, 1, ok ? 0 : 1};
}

VerificationReport make_report(std::string suite, const VerifyOptions& opts, std::string mode = "float") {
  VerificationReport r;
  r.suite = std::move(suite);
  r.seed = opts.seed;
  r.tolerance = opts.tolerance;
  r.mode = std::move(mode);
  return r;
}

/// Runs `per_sample(rng, worsts)` for every sample in parallel and merges
/// the per-sample worst cases in sample order.
template <typename PerSample>
std::vector<Aggregate> run_samples(std::vector<Aggregate> checks, const VerifyOptions& opts, const char* stream,
                                   std::int64_t samples, PerSample&& per_sample) {
  const std::size_t count = static_cast<std::size_t>(std::max<std::int64_t>(0, samples));
  std::vector<std::vector<Worst>> slots(count, std::vector<Worst>(checks.size()));
  const std::uint64_t seed = derive_seed(opts.seed, tag_of(stream));
  parallel_for(count, opts.threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    per_sample(rng, slots[i]);
  });
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t c = 0; c < checks.size(); ++c) checks[c].merge(slots[i][c], static_cast<std::int64_t>(i));
  }
  return checks;
}

/// Records each aggregate's check and its worst witness. `witness(rng)`
/// replays the draw of the worst sample.
template <typename Witness>
void record(VerificationReport& report, const std::vector<Aggregate>& checks, const VerifyOptions& opts,
            const char* stream, Witness&& witness) {
  const std::uint64_t seed = derive_seed(opts.seed, tag_of(stream));
  for (const Aggregate& a : checks) {
    report.checks.push_back(a.check());
    if (!a.worst_sample()) continue;
    CounterRng rng(seed, static_cast<std::uint64_t>(*a.worst_sample()));
    nlohmann::json w = witness(rng);
    w["sample"] = *a.worst_sample();
    if (!std::isnan(a.worst().lambda)) w["lambda"] = a.worst().lambda;
    if (a.worst().cube) w["cube"] = to_string(*a.worst().cube);
    report.witnesses[a.description()] = std::move(w);
  }
}

/// prod_{i > N} ||M_d chi_E||_{L^{p_i}} enclosed from below and above using
/// |E|^{1/p_i} <= ||M_d chi_E||_{p_i} <= 1 past a cutoff.
std::pair<double, double> tail_maximal_norms(const DyadicModel& model, const FunctionVector<double>& F) {
  const ExponentSequence& seq = F.exponents;
  if (!seq.has_tail()) return {1.0, 1.0};
  const double measure = support_measure(model, F.tail_support);
  if (measure == 0) return {0.0, 0.0};
  LeafFunction<double> chi(model.leaf_count());
  for (Eigen::Index x = 0; x < chi.size(); ++x) chi[x] = F.tail_support[x] ? 1.0 : 0.0;
  const LeafFunction<double> m = maximal(model, chi);
  double partial = 1.0;
  std::size_t i = seq.head_size();
  while (seq.remainder_after(i) > 1e-17 && i < seq.head_size() + 2000) {
    ++i;
    partial *= lp_norm(model, m, seq.exponent(i));
  }
  return {partial * std::pow(measure, seq.remainder_after(i)), partial};
}

double pow_inv(double x, double p) { return std::pow(x, 1.0 / p); }

}  // namespace

VerificationReport verify_holder(const DyadicModel& model, const ExponentSequence& seq, const VerifyOptions& opts) {
  VerificationReport report = make_report("holder", opts);
  const double p = seq.p();
  const ProductEstimate conj = conjugate_product(seq);
  report.constants["p"] = p;
  report.constants["conjugate_product"] = conj.value;
  const double tol = opts.tolerance;
  std::vector<Aggregate> checks{
      {"generalized Hoelder: ||prod f_i||_p <= prod ||f_i||_{p_i}"},
      {"chain link 1: ||M F||_p <= ||prod M_d f_i||_p"},
      {"chain link 2: ||prod M_d f_i||_p <= prod ||M_d f_i||_{p_i}"},
      {"chain link 3: prod ||M_d f_i||_{p_i} <= (prod p'_i) prod ||f_i||_{p_i}"},
  };
  checks = run_samples(std::move(checks), opts, "holder", opts.samples, [&](CounterRng& rng, std::vector<Worst>& w) {
    const FunctionVector<double> F = random_function_vector(model, seq, rng, opts.spread);
    const double norms = product_norm(model, F);
    w[0].add(lp_norm(model, pointwise_product(F), p), norms, tol);

    const double l1 = lp_norm(model, product_maximal(model, F), p);
    LeafFunction<double> g = LeafFunction<double>::Ones(model.leaf_count());
    double middle = 1.0;
    for (std::size_t i = 0; i < F.head.size(); ++i) {
      const LeafFunction<double> mf = maximal(model, F.head[i]);
      g = g.cwiseProduct(mf);
      middle *= lp_norm(model, mf, seq.exponent(i + 1));
    }
    if (F.has_tail()) {
      // The infinitely many factors M_d chi_E multiply out to chi_E.
      for (Eigen::Index x = 0; x < g.size(); ++x) {
        if (!F.tail_support[x]) g[x] = 0.0;
      }
    }
    const double l2 = lp_norm(model, g, p);
    const auto [tail_lo, tail_hi] = tail_maximal_norms(model, F);
    w[1].add(l1, l2, tol);
    w[2].add(l2, middle * tail_lo, tol);
    w[3].add(middle * tail_hi, conj.value * norms, tol);
  });
  record(report, checks, opts, "holder", [&](CounterRng& rng) {
    return nlohmann::json{{"F", to_json(random_function_vector(model, seq, rng, opts.spread))}};
  });
  return report;
}

namespace {

/// Sampled parts of the A_p theorem: the cube inequality and both weak forms.
void theorem_ap_sampled(const DyadicModel& model, const WeightVector<double>& W, double c1,
                        const VerifyOptions& opts, VerificationReport& report) {
  const ExponentSequence& seq = W.exponents();
  const double p = seq.p();
  const double s_tail = to_double(seq.tail_inverse_sum());
  const double tol = opts.tolerance;
  const CubeAggregate<double> v_mass = aggregate(model, W.v());
  std::vector<Aggregate> checks{
      {"cube form: v(B)^{1/p} prod avg_B f_i <= C prod ||f_i chi_B||"},
      {"weak type: lambda v({M F >= lambda})^{1/p} <= C prod ||f_i||"},
      {"weak type: lambda v({M F > lambda})^{1/p} <= C prod ||f_i||"},
  };
  checks = run_samples(std::move(checks), opts, "theorem_ap", opts.samples, [&](CounterRng& rng, std::vector<Worst>& w) {
    const FunctionVector<double> F = random_function_vector(model, seq, rng, opts.spread);
    const LevelValues<double> products = cube_products(model, F);
    std::vector<LevelValues<double>> powered;
    for (std::size_t i = 0; i < F.head.size(); ++i) {
      const double pi = seq.exponent(i + 1);
      const LeafFunction<double> g = (F.head[i].array().pow(pi) * W.omegas()[i].array()).matrix();
      powered.push_back(aggregate(model, g).integral);
    }
    const auto counts = detail::support_counts(model, F.tail_support);
    model.for_each_cube([&](int k, std::int64_t pos) {
      double norms = 1.0;
      for (std::size_t i = 0; i < powered.size(); ++i) norms *= pow_inv(powered[i][k][pos], seq.exponent(i + 1));
      if (F.has_tail()) {
        norms *= std::pow(static_cast<double>(counts[k][pos]) * model.leaf_measure<double>(), s_tail);
      }
      const double lhs = pow_inv(v_mass.integral[k][pos], p) * products[k][pos];
      w[0].add(lhs, c1 * norms, tol, std::numeric_limits<double>::quiet_NaN(), model.cube(k, pos));
    });

    const LeafFunction<double> m = product_maximal(model, F);
    const double rhs = c1 * product_norm(model, F, W);
    std::vector<double> lambdas;
    double lo = kInf, hi = 0.0;
    for (Eigen::Index x = 0; x < m.size(); ++x) {
      if (m[x] > 0) {
        lambdas.push_back(m[x]);
        lo = std::min(lo, m[x]);
        hi = std::max(hi, m[x]);
      }
    }
    if (hi > 0 && opts.lambda_grid > 1) {
      for (int j = 0; j < opts.lambda_grid; ++j) {
        lambdas.push_back(lo * std::pow(hi / lo, static_cast<double>(j) / (opts.lambda_grid - 1)));
      }
    }
    for (double lambda : lambdas) {
      w[1].add(weak_quantity(model, m, W.v(), p, lambda, false), rhs, tol, lambda);
      w[2].add(weak_quantity(model, m, W.v(), p, lambda, true), rhs, tol, lambda);
    }
  });
  record(report, checks, opts, "theorem_ap", [&](CounterRng& rng) {
    return nlohmann::json{{"F", to_json(random_function_vector(model, seq, rng, opts.spread))}};
  });
}

}  // namespace

VerificationReport verify_theorem_ap(const DyadicModel& model, const WeightVector<double>& W,
                                     const VerifyOptions& opts) {
  VerificationReport report = make_report("theorem_ap", opts);
  const ConstantReport c1 = ap_product_constant(model, W);
  report.constants["ap_product"] = to_json(c1);
  theorem_ap_sampled(model, W, c1.value, opts, report);
  const ConstantReport tf = testing_family_weak(model, W);
  report.constants["testing_family_weak"] = to_json(tf);
  report.checks.push_back(
      equality("testing family sigma chi_B attains [v, omega]_{A_p} in the weak form", tf.value, c1.value,
               opts.tolerance));
  report.witnesses[report.checks.back().description] = {
      {"cube", tf.attaining_cube ? to_string(*tf.attaining_cube) : ""},
      {"ap_cube", c1.attaining_cube ? to_string(*c1.attaining_cube) : ""}};
  return report;
}

VerificationReport verify_theorem_ap(const DyadicModel& model, const WeightVector<Rational>& W,
                                     const VerifyOptions& opts) {
  VerificationReport report = make_report("theorem_ap", opts, "exact");
  const ConstantReport c1 = ap_product_constant(model, W);
  report.constants["ap_product"] = to_json(c1);
  theorem_ap_sampled(model, to_double(model, W), c1.value, opts, report);
  const ConstantReport tf = testing_family_weak(model, W);
  report.constants["testing_family_weak"] = to_json(tf);
  const bool equal = compare(*tf.exact, *c1.exact) == 0;
  report.checks.push_back({"testing family sigma chi_B attains [v, omega]_{A_p} in the weak form (exact)", "==",
                           tf.value, c1.value, c1.value - tf.value, equal, false, 1, equal ? 0 : 1});
  report.witnesses[report.checks.back().description] = {
      {"cube", tf.attaining_cube ? to_string(*tf.attaining_cube) : ""},
      {"ap_cube", c1.attaining_cube ? to_string(*c1.attaining_cube) : ""}};
  return report;
}

VerificationReport verify_classical(const DyadicModel& model, const LeafFunction<double>& omega, const Rational& p,
                                    const VerifyOptions& opts) {
  VerificationReport report = make_report("classical", opts);
  const ExponentSequence seq({p});
  const WeightVector<double> W = WeightVector<double>::from_omegas(model, seq, omega, {omega});
  const ConstantReport ap = classical_ap(model, omega, p);
  const double pd = to_double(p), pc = pd / (pd - 1.0);
  const double bound = std::pow(ap.value, pc / pd) * std::pow(pd, pc / pd) * pc;
  report.constants["classical_ap"] = to_json(ap);
  report.constants["p"] = to_json(p);
  report.constants["upper_bound"] = bound;
  const double tol = opts.tolerance;

  std::vector<Aggregate> checks{
      {"||M_d f||_{L^p(omega)} <= [omega]^{p'/p} p^{p'/p} p' ||f||_{L^p(omega)}"},
      {"||M_d^mu f||_{L^p(mu)} <= p' ||f||_{L^p(mu)}"},
  };
  checks = run_samples(std::move(checks), opts, "classical", opts.samples, [&](CounterRng& rng, std::vector<Worst>& w) {
    const LeafFunction<double> f = random_function_vector(model, seq, rng, opts.spread).head[0];
    w[0].add(lp_norm(model, maximal(model, f), pd, &omega), bound * lp_norm(model, f, pd, &omega), tol);
    const LeafFunction<double> mu = random_weight(model, rng, opts.spread);
    const LeafFunction<double> g = random_function_vector(model, seq, rng, opts.spread).head[0];
    w[1].add(lp_norm(model, weighted_maximal(model, g, mu), pd, &mu), pc * lp_norm(model, g, pd, &mu), tol);
  });
  record(report, checks, opts, "classical", [&](CounterRng& rng) {
    const LeafFunction<double> f = random_function_vector(model, seq, rng, opts.spread).head[0];
    const LeafFunction<double> mu = random_weight(model, rng, opts.spread);
    const LeafFunction<double> g = random_function_vector(model, seq, rng, opts.spread).head[0];
    return nlohmann::json{{"f", to_json(f)}, {"mu", to_json(mu)}, {"g", to_json(g)}};
  });

  const NormCertificate cert = estimate_norm(model, {OperatorKind::strong, W}, opts.search,
                                             derive_seed(opts.seed, tag_of("classical_search")), opts.threads);
  report.constants["norm_lower_bound"] = cert.lower_bound;
  report.checks.push_back(single("[omega]_{A_p}^{1/p} <= ||M_d|| (searched lower bound)",
                                 std::pow(ap.value, 1.0 / pd), cert.lower_bound, tol));
  report.checks.push_back(single("searched lower bound <= proved upper bound", cert.lower_bound, bound, tol));
  report.witnesses["searched lower bound"] = to_json(cert);
  report.checks.push_back(equality("stated equality [omega]_{A_p} = ||M_d|| (not proved as stated)", ap.value,
                                   cert.lower_bound, tol, true));
  return report;
}

VerificationReport verify_carleson(const DyadicModel& model, const WeightVector<double>& W,
                                   const std::optional<CarlesonFamily<double>>& a, const VerifyOptions& opts) {
  VerificationReport report = make_report("carleson", opts);
  const ExponentSequence& seq = W.exponents();
  const double p = seq.p();
  const double s_tail = to_double(seq.tail_inverse_sum());
  const double conj = conjugate_product(seq).value;
  const LeafFunction<double> nu = nu_sigma(W);
  std::optional<double> fixed_a;
  if (a) {
    const ConstantReport c = carleson_constant(model, *a, nu);
    fixed_a = c.value;
    report.constants["carleson"] = to_json(c);
  }
  report.constants["conjugate_product"] = conj;
  const double tol = opts.tolerance;
  const ProductMaximalOptions<double> weighted{&W.sigmas(), 0};

  std::vector<Aggregate> checks{
      {"(sum_B a_B (prod sigma-avg_B f_i)^p)^{1/p} <= A^{1/p} ||M^sigma F||_{L^p(nu)}"},
      {"A^{1/p} ||M^sigma F||_{L^p(nu)} <= A^{1/p} (prod p'_i) prod ||f_i||_{L^{p_i}(sigma_i)}"},
  };
  checks = run_samples(std::move(checks), opts, "carleson", opts.samples, [&](CounterRng& rng, std::vector<Worst>& w) {
    const CarlesonFamily<double> family = a ? *a : random_carleson_family(model, rng);
    const double A = fixed_a ? *fixed_a : carleson_constant(model, family, nu).value;
    const FunctionVector<double> F = random_function_vector(model, seq, rng, opts.spread);
    const LevelValues<double> products = cube_products(model, F, &W.sigmas());
    double sum = 0.0;
    for (int k = 0; k <= model.depth(); ++k) {
      sum += (family.levels()[k].array() * products[k].array().pow(p)).sum();
    }
    const double scale = std::pow(A, 1.0 / p);
    const double middle = scale * lp_norm(model, product_maximal(model, F, weighted), p, &nu);
    double norms = 1.0;
    for (std::size_t i = 0; i < F.head.size(); ++i) {
      norms *= lp_norm(model, F.head[i], seq.exponent(i + 1), &W.sigmas()[i]);
    }
    if (F.has_tail()) norms *= std::pow(support_measure(model, F.tail_support), s_tail);
    w[0].add(pow_inv(sum, p), middle, tol);
    w[1].add(middle, scale * conj * norms, tol);
  });
  record(report, checks, opts, "carleson", [&](CounterRng& rng) {
    nlohmann::json out;
    if (!a) {
      const CarlesonFamily<double> family = random_carleson_family(model, rng);
      nlohmann::json entries = nlohmann::json::object();
      for (const auto& [cube, value] : family.entries(model)) entries[to_string(cube)] = value;
      out["a"] = std::move(entries);
      out["A"] = number_to_json(carleson_constant(model, family, nu).value);
    }
    out["F"] = to_json(random_function_vector(model, seq, rng, opts.spread));
    return out;
  });
  return report;
}

VerificationReport verify_sp(const DyadicModel& model, const WeightVector<double>& W, const VerifyOptions& opts) {
  VerificationReport report = make_report("sp", opts);
  const ExponentSequence& seq = W.exponents();
  const double p = seq.p();
  const ConstantReport s = sp_testing_constant(model, W);
  const RhReport rh = rh_constant(model, W);
  const double conj = conjugate_product(seq).value;
  const double stated = s.value * std::pow(rh.report.value, 1.0 / p);
  const double bound = stated * conj;
  report.constants["sp_testing"] = to_json(s);
  report.constants["rh"] = to_json(rh.report);
  report.constants["conjugate_product"] = conj;
  report.constants["upper_bound"] = bound;
  report.constants["stated_upper_bound"] = stated;
  const double tol = opts.tolerance;

  std::vector<Aggregate> checks{
      {"||M F||_{L^p(v)} <= S RH^{1/p} (prod p'_i) prod ||f_i||"},
      {"||M F||_{L^p(v)} <= S RH^{1/p} prod ||f_i|| (stated without prod p'_i)", true},
  };
  checks = run_samples(std::move(checks), opts, "sp", opts.samples, [&](CounterRng& rng, std::vector<Worst>& w) {
    const FunctionVector<double> F = random_function_vector(model, seq, rng, opts.spread);
    const double lhs = lp_norm(model, product_maximal(model, F), p, &W.v());
    const double norms = product_norm(model, F, W);
    w[0].add(lhs, bound * norms, tol);
    w[1].add(lhs, stated * norms, tol);
  });
  record(report, checks, opts, "sp", [&](CounterRng& rng) {
    return nlohmann::json{{"F", to_json(random_function_vector(model, seq, rng, opts.spread))}};
  });

  const OperatorSpec spec{OperatorKind::strong, W};
  const NormCertificate cert =
      estimate_norm(model, spec, opts.search, derive_seed(opts.seed, tag_of("sp_search")), opts.threads);
  report.constants["norm_lower_bound"] = cert.lower_bound;
  report.checks.push_back(single("[v, omega]_{S_p} <= ||M_d|| (searched lower bound)", s.value, cert.lower_bound, tol));
  report.checks.push_back(single("searched lower bound <= S RH^{1/p} prod p'_i", cert.lower_bound, bound, tol));
  report.witnesses["searched lower bound"] = to_json(cert);

  double best = 0.0;
  std::optional<CubeId> at;
  for (const CubeId& cube : model.cubes()) {
    const double r = rayleigh_ratio(model, spec, testing_vector(model, W, cube));
    if (r > best) {
      best = r;
      at = cube;
    }
  }
  // With a tail the testing vector vanishes off B and its ratio is exactly
  // the testing ratio; a finite vector also sees the cubes above B.
  report.checks.push_back(seq.has_tail()
                              ? equality("testing vectors sigma chi_B reproduce [v, omega]_{S_p}", best, s.value, tol)
                              : single("[v, omega]_{S_p} <= best testing vector ratio", s.value, best, tol));
  report.witnesses[report.checks.back().description] = {{"cube", at ? to_string(*at) : ""}};
  return report;
}

VerificationReport verify_corollary_astar(const DyadicModel& model, const WeightVector<double>& W,
                                          const VerifyOptions& opts) {
  VerificationReport report = make_report("corollary_astar", opts);
  const ExponentSequence& seq = W.exponents();
  const RegularityConstants reg = regularity_constants(seq);
  report.constants["log_sum"] = number_to_json(reg.log_sum.value);
  report.constants["log_sum_status"] = to_string(reg.log_sum.status);
  if (reg.log_sum.status != SeriesStatus::finite) {
    report.skipped = "sum ln p_i / p_i is not finite";
    return report;
  }
  double c = reg.grafakos_product.value;
  std::vector<std::pair<double, double>> heads;
  for (std::size_t i = 0; i < W.head_size(); ++i) {
    const double pi = seq.exponent(i + 1);
    const double a = classical_ap(model, W.omegas()[i], seq.head()[i]).value;
    heads.emplace_back(a, pi);
    c *= std::pow(a, seq.conjugate(i + 1) / pi);
  }
  report.constants["a_star"] = a_star_constant(heads);
  report.constants["grafakos_product"] = reg.grafakos_product.value;
  report.constants["C"] = c;
  report.constants["v_convention"] = to_string(opts.convention);
  const double p = seq.p();
  const double tol = opts.tolerance;

  std::vector<VConvention> order{opts.convention};
  order.push_back(opts.convention == VConvention::p_over_p ? VConvention::one_over_p : VConvention::p_over_p);
  std::vector<LeafFunction<double>> vs;
  std::vector<Aggregate> checks;
  for (VConvention conv : order) {
    const bool proved = conv == VConvention::p_over_p;
    vs.push_back(proved ? omega_product_p_over_p(W) : omega_product_one_over_p(W));
    checks.emplace_back(std::string("||M F||_{L^p(v)} <= C prod ||f_i||, v = prod omega_i^{") +
                            (proved ? "p/p_i" : "1/p_i") + "}",
                        !proved);
  }
  checks = run_samples(std::move(checks), opts, "corollary_astar", opts.samples,
                       [&](CounterRng& rng, std::vector<Worst>& w) {
                         const FunctionVector<double> F = random_function_vector(model, seq, rng, opts.spread);
                         const LeafFunction<double> m = product_maximal(model, F);
                         const double rhs = c * product_norm(model, F, W);
                         for (std::size_t j = 0; j < vs.size(); ++j) w[j].add(lp_norm(model, m, p, &vs[j]), rhs, tol);
                       });
  record(report, checks, opts, "corollary_astar", [&](CounterRng& rng) {
    return nlohmann::json{{"F", to_json(random_function_vector(model, seq, rng, opts.spread))}};
  });
  return report;
}

}  // namespace dyadlab
