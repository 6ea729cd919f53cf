#ifndef TERMSCAPE_RANDOM_HPP
#define TERMSCAPE_RANDOM_HPP

// Portable pseudo-random primitives. Every draw is defined bit-exactly so that
// ports in other languages reproduce synthetic corpora and layout starts:
//
//   splitmix64:   state += 0x9E3779B97F4A7C15
//                 z = state
//                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                 return z ^ (z >> 31)
//   uniform01:    (next() >> 11) * 2^-53            in [0, 1)
//   below(n):     next() % n, rejecting draws >= n * floor((2^64 - 1) / n)
//   poisson(l):   Knuth's product method on chunks of at most 30
//                 (Poisson(a + b) = Poisson(a) + Poisson(b)), chunks drawn in
//                 order: floor(l / 30) chunks of 30, then the remainder
//   hash64(s):    FNV-1a 64 over the UTF-8 bytes, then the splitmix64 finalizer

#include <cmath>
#include <cstdint>
#include <string_view>

namespace termscape {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return mix64(h);
}

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = (UINT64_MAX / n) * n;
    std::uint64_t draw = next();
    while (draw >= limit) draw = next();
    return draw % n;
  }

  std::uint64_t poisson(double lambda) {
    std::uint64_t total = 0;
    while (lambda > 30.0) {
      total += poisson_small(30.0);
      lambda -= 30.0;
    }
    return total + poisson_small(lambda);
  }

private:
  std::uint64_t poisson_small(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = uniform01();
    while (p > limit) {
      ++k;
      p *= uniform01();
    }
    return k;
  }

  std::uint64_t state_;
};

}  // namespace termscape

#endif
