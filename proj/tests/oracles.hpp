// Brute-force reference implementations used only by the tests. They work
// directly on row-major leaf coordinates and rescan every leaf for every cube,
// so they share nothing with the tree-order sweeps they check.
#ifndef DYADLAB_TESTS_ORACLES_HPP
#define DYADLAB_TESTS_ORACLES_HPP

#include "dyadlab/dyadic_model.hpp"
#include "dyadlab/function_vectors.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace oracle {

using dyadlab::CubeId;
using dyadlab::Vec;

struct Grid {
  int n;
  int K;
  std::int64_t leaves() const { return std::int64_t{1} << (n * K); }
};

inline std::vector<std::int64_t> coords(const Grid& g, std::int64_t leaf) {
  std::vector<std::int64_t> c(g.n);
  const std::int64_t side = std::int64_t{1} << g.K;
  for (int d = g.n - 1; d >= 0; --d) {
    c[d] = leaf % side;
    leaf /= side;
  }
  return c;
}

inline bool inside(const Grid& g, const CubeId& cube, std::int64_t leaf) {
  const auto c = coords(g, leaf);
  for (int d = 0; d < g.n; ++d) {
    if ((c[d] >> (g.K - cube.level)) != cube.index[d]) return false;
  }
  return true;
}

/// The level-k cube containing a leaf.
inline CubeId ancestor(const Grid& g, std::int64_t leaf, int k) {
  CubeId cube{k, coords(g, leaf)};
  for (auto& i : cube.index) i >>= (g.K - k);
  return cube;
}

/// All cubes, level by level, lexicographic within a level.
inline std::vector<CubeId> all_cubes(const Grid& g) {
  std::vector<CubeId> out;
  for (int k = 0; k <= g.K; ++k) {
    const std::int64_t side = std::int64_t{1} << k;
    std::int64_t total = 1;
    for (int d = 0; d < g.n; ++d) total *= side;
    for (std::int64_t r = 0; r < total; ++r) {
      CubeId c{k, std::vector<std::int64_t>(g.n)};
      std::int64_t rest = r;
      for (int d = g.n - 1; d >= 0; --d) {
        c.index[d] = rest % side;
        rest /= side;
      }
      out.push_back(c);
    }
  }
  return out;
}

template <typename Scalar>
Scalar leaf_measure(const Grid& g) {
  return dyadlab::dyadic_measure<Scalar>(g.n * g.K);
}

template <typename Scalar>
Scalar cube_measure(const Grid& g, const CubeId& cube) {
  return dyadlab::dyadic_measure<Scalar>(g.n * cube.level);
}

template <typename Scalar>
Scalar integral(const Grid& g, const Vec<Scalar>& f, const CubeId& cube) {
  Scalar sum(0);
  for (std::int64_t x = 0; x < g.leaves(); ++x) {
    if (inside(g, cube, x)) sum += f[x];
  }
  return sum * leaf_measure<Scalar>(g);
}

template <typename Scalar>
Scalar average(const Grid& g, const Vec<Scalar>& f, const CubeId& cube) {
  return integral(g, f, cube) / cube_measure<Scalar>(g, cube);
}

template <typename Scalar>
Scalar max_of(const Scalar& a, const Scalar& b) {
  return a < b ? b : a;
}

template <typename Scalar>
Vec<Scalar> maximal(const Grid& g, const Vec<Scalar>& f) {
  Vec<Scalar> out(g.leaves());
  for (std::int64_t x = 0; x < g.leaves(); ++x) {
    Scalar best(0);
    for (int k = 0; k <= g.K; ++k) best = max_of(best, average(g, f, ancestor(g, x, k)));
    out[x] = best;
  }
  return out;
}

template <typename Scalar>
Vec<Scalar> weighted_maximal(const Grid& g, const Vec<Scalar>& f, const Vec<Scalar>& mu) {
  const Vec<Scalar> fmu = f.cwiseProduct(mu);
  Vec<Scalar> out(g.leaves());
  for (std::int64_t x = 0; x < g.leaves(); ++x) {
    Scalar best(0);
    for (int k = 0; k <= g.K; ++k) {
      const CubeId c = ancestor(g, x, k);
      best = max_of(best, Scalar(integral(g, fmu, c) / integral(g, mu, c)));
    }
    out[x] = best;
  }
  return out;
}

/// prod_i avg_B f_i times the tail limit (1 iff B inside the support).
template <typename Scalar>
Scalar cube_product(const Grid& g, const dyadlab::FunctionVector<Scalar>& F, const CubeId& cube) {
  Scalar prod(1);
  for (const auto& f : F.head) prod *= average(g, f, cube);
  if (F.has_tail()) {
    for (std::int64_t x = 0; x < g.leaves(); ++x) {
      if (inside(g, cube, x) && !F.tail_support[x]) return Scalar(0);
    }
  }
  return prod;
}

template <typename Scalar>
Vec<Scalar> product_maximal(const Grid& g, const dyadlab::FunctionVector<Scalar>& F, int level_floor = 0) {
  Vec<Scalar> out(g.leaves());
  for (std::int64_t x = 0; x < g.leaves(); ++x) {
    Scalar best(0);
    for (int k = level_floor; k <= g.K; ++k) best = max_of(best, cube_product(g, F, ancestor(g, x, k)));
    out[x] = best;
  }
  return out;
}

/// max over G of (sum_{B subset G} a_B) / int_G nu, by double enumeration.
inline double carleson(const Grid& g, const std::vector<std::pair<CubeId, double>>& a, const Vec<double>& nu) {
  double best = 0.0;
  for (const CubeId& G : all_cubes(g)) {
    double num = 0.0;
    for (const auto& [B, aB] : a) {
      bool sub = B.level >= G.level;
      for (int d = 0; sub && d < g.n; ++d) sub = (B.index[d] >> (B.level - G.level)) == G.index[d];
      if (sub) num += aB;
    }
    const double den = integral(g, nu, G);
    if (den == 0.0) {
      if (num > 0) return INFINITY;
      continue;
    }
    best = std::max(best, num / den);
  }
  return best;
}

/// int_B M_d(sigma chi_B)^p v, building sigma chi_B explicitly. With a
/// finite exponent sequence (no tail) cubes larger than B still contribute.
template <typename Scalar, typename Pow>
Scalar testing_integral(const Grid& g, const std::vector<Vec<Scalar>>& sigmas, const Vec<Scalar>& v,
                        const CubeId& B, Pow&& pow, bool with_tail = true) {
  Vec<Scalar> chi = Vec<Scalar>::Zero(g.leaves());
  std::vector<Vec<Scalar>> restricted(sigmas.size(), Vec<Scalar>::Zero(g.leaves()));
  for (std::int64_t y = 0; y < g.leaves(); ++y) {
    if (!inside(g, B, y)) continue;
    chi[y] = Scalar(1);
    for (std::size_t i = 0; i < sigmas.size(); ++i) restricted[i][y] = sigmas[i][y];
  }
  std::map<CubeId, Scalar> product;  // per cube C, prod_i avg_C (sigma_i chi_B) times the tail limit
  const auto product_at = [&](const CubeId& C) {
    auto it = product.find(C);
    if (it != product.end()) return it->second;
    Scalar prod(1);
    // Tail coordinates are chi_B; lim_m (avg_C chi_B)^m is 1 only when the average is 1.
    if (with_tail && average(g, chi, C) != Scalar(1)) {
      prod = Scalar(0);
    } else {
      for (const auto& s : restricted) prod *= average(g, s, C);
    }
    return product.emplace(C, prod).first->second;
  };
  Scalar sum(0);
  for (std::int64_t x = 0; x < g.leaves(); ++x) {
    if (!inside(g, B, x)) continue;
    Scalar best(0);
    for (int k = 0; k <= g.K; ++k) best = max_of(best, product_at(ancestor(g, x, k)));
    sum += pow(best) * v[x];
  }
  return sum * leaf_measure<Scalar>(g);
}

}  // namespace oracle

#endif  // DYADLAB_TESTS_ORACLES_HPP
