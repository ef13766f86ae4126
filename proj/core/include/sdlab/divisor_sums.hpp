#pragma once

// Divisor-count and totient sieves, the gcd/φ identity, η(q), iterated
// logarithm weights and the weighted divisor series G(x), H(x).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "sdlab/targets.hpp"

namespace sdlab {

using Rational = boost::rational<std::int64_t>;

inline constexpr std::uint64_t kMaxSieve = 100'000'000;
inline constexpr std::size_t kDefaultSieveBudget = std::size_t{1536} << 20;

class SieveTable {
 public:
  std::uint64_t limit() const { return limit_; }
  std::uint32_t divisors(std::uint64_t n) const { return d_[n]; }
  std::uint32_t totient(std::uint64_t n) const { return phi_[n]; }

  /// Bytes the sieve needs for `limit`.
  static std::size_t footprint(std::uint64_t limit);

 private:
  friend SieveTable sieve(std::uint64_t limit, std::size_t budget);
  std::uint64_t limit_ = 0;
  std::vector<std::uint16_t> d_;
  std::vector<std::uint32_t> phi_;
};

/// Linear sieve for d(n) and φ(n), n ≤ limit ≤ 1e8. Refuses with
/// ValidationError when the footprint exceeds `budget` bytes.
SieveTable sieve(std::uint64_t limit, std::size_t budget = kDefaultSieveBudget);

struct GcdIdentity {
  Rational lhs;  // (1/n)·Σ_{m≤n} gcd(n, m)
  Rational rhs;  // Σ_{e|n} φ(e)/e
  bool equal = false;
};

GcdIdentity gcd_sum_identity_check(std::uint64_t n);

struct EtaReport {
  Rational eta_value;           // Σ_{1≤r≤q} gcd(qy+z, ry+z)/(qy+z)
  Rational divisor_phi_bound;   // Σ_{e|qy+z} φ(e)/e
  std::uint64_t d_bound = 0;    // d(qy+z)
  bool chain_ok = false;        // η ≤ φ-sum ≤ d
};

EtaReport eta(std::uint64_t q, std::uint64_t y, std::uint64_t z);

/// F(x) = x·log x·…·log^{(k−3)}x·(log^{(k−2)}x)^{1+ε} for k ≥ 3 and
/// F(x) = x^{1+ε} for k = 2, clamped below at x_min, the smallest argument
/// at which every iterated logarithm in the product is ≥ 1.
struct IterLogWeight {
  int k = 3;
  long double eps = 1.0L;
  long double x_min = 0;

  static IterLogWeight make(int k, long double eps);
};

/// F(max(x, x_min)).
long double weight(long double x, const IterLogWeight& w);
/// h(x) = F(log x), with the argument clamped at x_min.
long double h_weight(long double x, const IterLogWeight& w);

struct WeightCondition {
  long double ratio_bound = 0;   // max h(2q)/h(q) over the log grid
  long double tail_partial = 0;  // Σ_{ℓ≤L} 1/h(2^ℓ)
  bool cauchy_ok = false;        // last ten increments < 1e-3 of the total
};

WeightCondition weight_condition_check(const IterLogWeight& w, int levels,
                                       int points_per_octave = 8);

struct DivisorSeriesRow {
  long double x = 0;
  long double S = 0;     // Σ_{1≤n≤x} 1/d(n)
  long double G = 0;     // Σ 1/(F(log d(n))·d(n))
  long double H = 0;     // Σ 1/(F((log 2)·log log n)·√log n)
  long double psiG = 0;  // ψ(n)-weighted G
  long double psiH = 0;  // ψ(n)-weighted H
  long double reference = 0;  // x/(F(log log x)·√log x)
  long double ratio_G = 0;
  long double ratio_H = 0;
};

/// All sums run over n ≡ z (mod y); G and H (and their ψ variants) start
/// at n = kSeriesStart, where log log n > 0.
inline constexpr std::uint64_t kSeriesStart = 3;

std::vector<DivisorSeriesRow> divisor_series(std::span<const long double> grid,
                                             const IterLogWeight& w, const ApproxFunction& psi,
                                             std::uint64_t y, std::uint64_t z);

/// CSV `x,G,H,psiG,psiH,reference,ratio_G,ratio_H`.
void write_series_csv(std::ostream& out, std::span<const DivisorSeriesRow> rows);

}  // namespace sdlab
