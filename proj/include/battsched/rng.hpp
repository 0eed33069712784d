#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Deterministic random number generation. Every stochastic quantity in the
// library is produced by a counter-based scheme: a 64-bit key is derived from
// a seed plus integer indices (hour, origin, step, scenario, ...) through the
// splitmix64 finalizer, and Gaussians come from a Box-Muller transform of two
// uniforms drawn from that key. Results are therefore reproducible from the
// seed alone, independent of evaluation order, and identical across runs.
//
// The algorithm name accepted in configuration files is
// "splitmix64-boxmuller".

namespace battsched::rng {

inline constexpr std::string_view kAlgorithmName = "splitmix64-boxmuller";

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Folds one index into a key. Chain calls to absorb several indices.
inline std::uint64_t combine(std::uint64_t key, std::uint64_t v) {
  return mix64(key + kGolden + v * 0xD6E8FEB86659FD93ULL);
}

inline std::uint64_t combine(std::uint64_t key, std::uint64_t a,
                             std::uint64_t b) {
  return combine(combine(key, a), b);
}

inline std::uint64_t combine(std::uint64_t key, std::uint64_t a,
                             std::uint64_t b, std::uint64_t c) {
  return combine(combine(key, a, b), c);
}

// FNV-1a of a label, used to derive named sub-seeds from one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return combine(master, h);
}

struct SplitMix64 {
  std::uint64_t state = 0;
  std::uint64_t next() {
    state += kGolden;
    return mix64(state);
  }
};

// Maps 64 random bits to (0, 1]; never returns 0 so log() is safe.
inline double unit_open(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Standard normal from a key: Box-Muller, cosine branch.
inline double gaussian_at(std::uint64_t key) {
  SplitMix64 g{key};
  const double u1 = unit_open(g.next());
  const double u2 = unit_open(g.next());
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Sequential Gaussian stream for consumers that do not need random access.
struct GaussianStream {
  explicit GaussianStream(std::uint64_t seed) : gen_{seed} {}
  double next() {
    const double u1 = unit_open(gen_.next());
    const double u2 = unit_open(gen_.next());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  SplitMix64 gen_;
};

}  // namespace battsched::rng
