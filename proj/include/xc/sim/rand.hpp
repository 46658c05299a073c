#pragma once

#include <cstdint>
#include <string_view>

namespace xc::sim {

// Deterministic splitmix64 streams. All simulator randomness is derived from
// the run seed through these, so runs are reproducible across platforms
// (std:: distributions are implementation-defined and never used).
struct SplitMix {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t seed_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : label) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ull;
  return h;
}

// Sub-stream keyed by (seed, label, a, b): deterministic and order-free.
inline SplitMix stream(std::uint64_t seed, std::string_view label, std::uint64_t a = 0,
                       std::uint64_t b = 0) {
  return SplitMix{seed_mix(seed_mix(seed_mix(seed, seed_label(label)), a), b)};
}

}  // namespace xc::sim
