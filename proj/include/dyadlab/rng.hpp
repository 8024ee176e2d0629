#ifndef DYADLAB_RNG_HPP
#define DYADLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dyadlab {

/// Counter-based generator: the n-th draw of stream s under seed k is a pure
/// function of (k, s, n), so sample i sees the same numbers regardless of
/// which thread evaluates it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() noexcept { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }
  bool bernoulli(double prob) noexcept { return uniform() < prob; }

  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives a sub-seed for a named purpose so that suites draw independent
/// streams from one configured seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return CounterRng::mix(seed * 0xd1342543de82ef95ULL + CounterRng::mix(tag));
}

constexpr std::uint64_t tag_of(const char* name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *name; ++name) h = (h ^ static_cast<unsigned char>(*name)) * 0x100000001b3ULL;
  return h;
}

}  // namespace dyadlab

#endif  // DYADLAB_RNG_HPP
