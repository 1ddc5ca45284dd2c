#pragma once

#include <cstdint>
#include <random>

namespace exmatch {

// Seeded generator with rejection-sampled bounded draws; identical streams on
// every platform for a given seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, bound), bound >= 1
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % bound;
  }

  // uniform in [lo, hi] inclusive
  int int_in(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(double p) {
    return static_cast<double>(eng_()) < p * static_cast<double>(~std::uint64_t{0});
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace exmatch
