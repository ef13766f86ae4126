#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sdlab/torus.hpp"

namespace sdlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

enum class BetaKind { Rational, Golden, SqrtFrac, CfPeriodic, Random };

/// How a rotation number β ∈ (0,1) is specified. Resolution is exact: every
/// kind can produce floor(β·2^bits) for arbitrary `bits`.
class BetaSpec {
 public:
  static BetaSpec rational(const BigInt& num, const BigInt& den);
  /// Exact decimal such as "0.3" (stored as 3/10).
  static BetaSpec decimal(std::string_view text);
  /// (√5 − 1)/2.
  static BetaSpec golden();
  /// Fractional part of √D, D a positive non-square.
  static BetaSpec sqrt_frac(std::uint64_t d);
  /// Purely periodic [0; a1, ..., ak, a1, ..., ak, ...].
  static BetaSpec cf_periodic(std::vector<std::uint64_t> quotients);
  /// 128 random bits drawn from SplitMix64(seed).
  static BetaSpec random(std::uint64_t seed);

  /// CLI grammar: `0.3`, `1/3`, `golden`, `sqrt:D`, `cf:[a,b,...]`, `rand`
  /// (uses `seed`) or `rand:SEED`.
  static BetaSpec parse(std::string_view text, std::uint64_t seed = 0);

  BetaKind kind() const { return kind_; }
  /// Exact value when β is rational (Rational and Random kinds).
  std::optional<BigRational> exact() const;
  /// floor(β · 2^bits).
  BigInt scaled_floor(unsigned bits) const;
  /// β on the 128-bit grid, rounded down.
  TorusPoint resolve() const;
  std::string describe() const;

  const std::vector<std::uint64_t>& period() const { return period_; }
  std::uint64_t radicand() const { return radicand_; }

 private:
  BetaKind kind_ = BetaKind::Rational;
  BigRational value_;                   // Rational / Random
  std::uint64_t radicand_ = 0;          // SqrtFrac
  std::vector<std::uint64_t> period_;   // CfPeriodic
  std::string text_;
};

/// Exact TorusPoint -> rational raw/2^128.
BigRational to_rational(TorusPoint x);

}  // namespace sdlab
