#pragma once

// Truncated two-sine multiplier model
//   F(β, j) = j·sin π(jβ − r0) + ρ(ρ−1)·sin π(jβ − r1)
// with r0 = (ρ − 1 − βn + β)/2 and r1 = r0 − (β + ½), and the scan for
// small divisors |F(β, j)| < c.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdlab/beta.hpp"
#include "sdlab/torus.hpp"

namespace sdlab {

struct RubinParams {
  int n = 2;
  long double rho = 0;
  TorusPoint beta;
  std::string beta_text;
  long double theta = 0;  // βπ
  long double t = 0;      // cos θ
  BigRational r0_exact;
  BigRational r1_exact;
  long double r0 = 0;
  long double r1 = 0;
  bool critical = false;  // ρ ∈ {0, 1}: the second term vanishes

  /// ρ(ρ − 1).
  long double coupling() const { return rho * (rho - 1.0L); }
};

/// Rejects n < 2, non-finite ρ, and β ∈ {0, ½, 1}.
RubinParams make_params(int n, long double rho, const BetaSpec& beta);
RubinParams make_params(int n, long double rho, TorusPoint beta);

inline constexpr std::uint64_t kMaxJ = 1'000'000'000;

/// F(β, j). jβ is reduced mod 2 in fixed point before any sine is taken.
long double f_value(const RubinParams& p, std::uint64_t j);

/// ‖jβ − r0‖.
long double frac_distance(const RubinParams& p, std::uint64_t j);

/// F(β, j) / j^(ρ+1).
long double model_multiplier(const RubinParams& p, std::uint64_t j);

struct SmallDivisorHit {
  std::uint64_t j = 0;
  long double f_value = 0;
  long double frac_distance = 0;
};

struct FScanOptions {
  unsigned threads = 1;
  int precision_bits = 128;
  bool prune = true;
};

/// Every j ≤ j_max with |F(β, j)| < c, ordered by j. With pruning, j is
/// skipped when ‖jβ − r0‖ > (c + |ρ(ρ−1)|)/(2j) + 1e-9, which can never drop
/// a hit because |sin πu| ≥ 2‖u‖.
std::vector<SmallDivisorHit> scan_small_divisors(const RubinParams& p, long double c,
                                                 std::uint64_t j_max, FScanOptions options = {});

/// Throws PrecisionError when F cannot be evaluated to 1e-6 absolute at j_max.
void check_f_precision(std::uint64_t j_max, int bits);

/// CSV with header `j,f_value,frac_distance`.
void write_f_hits_csv(std::ostream& out, std::span<const SmallDivisorHit> hits);

}  // namespace sdlab
