#pragma once

#include <cstdint>

#include "sdlab/torus.hpp"

namespace sdlab {

/// SplitMix64 (Steele, Lea, Flood). State transition: s += 0x9e3779b97f4a7c15;
/// output is the standard two-round xor-shift-multiply finalizer of s.
/// Fixed so experiments replay bit-for-bit in other implementations.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform point of (0, 1) with 128 random bits: high word first, then low word.
  TorusPoint torus_point() {
    for (;;) {
      const std::uint64_t hi = next();
      const std::uint64_t lo = next();
      const u128 raw = (static_cast<u128>(hi) << 64) | lo;
      if (raw != 0) return TorusPoint::from_raw(raw);
    }
  }

  /// Uniform integer in [lo, hi] (inclusive); tiny modulo bias is irrelevant here.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + next() % (hi - lo + 1);
  }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace sdlab
