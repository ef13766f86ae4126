#include "sdlab/divisor_sums.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "sdlab/error.hpp"
#include "sdlab/format.hpp"

namespace sdlab {

namespace {

std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (std::uint64_t e = 1; e * e <= n; ++e) {
    if (n % e != 0) continue;
    small.push_back(e);
    if (e * e != n) large.push_back(n / e);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::uint64_t totient_by_factoring(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

Rational phi_over_divisors(std::uint64_t n) {
  // Σ_{e|n} φ(e)/e over the common denominator n.
  std::int64_t num = 0;
  for (auto e : divisors_of(n)) num += static_cast<std::int64_t>(totient_by_factoring(e) * (n / e));
  return Rational(num, static_cast<std::int64_t>(n));
}

}  // namespace

std::size_t SieveTable::footprint(std::uint64_t limit) {
  const auto n = static_cast<std::size_t>(limit) + 1;
  const double primes = limit < 3 ? 4.0 : 1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
  return n * (sizeof(std::uint16_t) + sizeof(std::uint32_t) + 1) +
         static_cast<std::size_t>(primes) * sizeof(std::uint32_t);
}

SieveTable sieve(std::uint64_t limit, std::size_t budget) {
  require(limit >= 1 && limit <= kMaxSieve, "sieve: limit must be in [1, 1e8]");
  require(SieveTable::footprint(limit) <= budget,
          "sieve: limit " + std::to_string(limit) + " needs " +
              std::to_string(SieveTable::footprint(limit) >> 20) + " MiB, over the memory budget");
  SieveTable t;
  t.limit_ = limit;
  t.d_.assign(limit + 1, 0);
  t.phi_.assign(limit + 1, 0);
  std::vector<std::uint8_t> spf_exp(limit + 1, 0);  // exponent of the smallest prime factor
  std::vector<std::uint32_t> primes;
  t.d_[1] = 1;
  t.phi_[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.d_[i] == 0) {
      primes.push_back(static_cast<std::uint32_t>(i));
      t.d_[i] = 2;
      t.phi_[i] = static_cast<std::uint32_t>(i - 1);
      spf_exp[i] = 1;
    }
    for (const std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (m > limit) break;
      if (i % p == 0) {
        spf_exp[m] = static_cast<std::uint8_t>(spf_exp[i] + 1);
        t.d_[m] = static_cast<std::uint16_t>(t.d_[i] / (spf_exp[i] + 1) * (spf_exp[i] + 2));
        t.phi_[m] = t.phi_[i] * p;
        break;
      }
      spf_exp[m] = 1;
      t.d_[m] = static_cast<std::uint16_t>(t.d_[i] * 2);
      t.phi_[m] = t.phi_[i] * (p - 1);
    }
  }
  return t;
}

GcdIdentity gcd_sum_identity_check(std::uint64_t n) {
  require(n >= 1 && n <= 1'000'000'000, "gcd identity: n must be in [1, 1e9]");
  std::int64_t total = 0;
  for (std::uint64_t m = 1; m <= n; ++m) total += static_cast<std::int64_t>(std::gcd(n, m));
  GcdIdentity r;
  r.lhs = Rational(total, static_cast<std::int64_t>(n));
  r.rhs = phi_over_divisors(n);
  r.equal = r.lhs == r.rhs;
  return r;
}

EtaReport eta(std::uint64_t q, std::uint64_t y, std::uint64_t z) {
  require(q >= 1, "eta: q must be >= 1");
  require(y >= 1 && z < y, "eta: requires y >= 1 and 0 <= z < y");
  const std::uint64_t n = q * y + z;
  std::int64_t total = 0;
  for (std::uint64_t r = 1; r <= q; ++r) total += static_cast<std::int64_t>(std::gcd(n, r * y + z));
  EtaReport rep;
  rep.eta_value = Rational(total, static_cast<std::int64_t>(n));
  rep.divisor_phi_bound = phi_over_divisors(n);
  rep.d_bound = divisors_of(n).size();
  rep.chain_ok = rep.eta_value <= rep.divisor_phi_bound &&
                 rep.divisor_phi_bound <= Rational(static_cast<std::int64_t>(rep.d_bound));
  return rep;
}

IterLogWeight IterLogWeight::make(int k, long double eps) {
  require(k >= 2 && k <= 5, "weight: k must be in [2, 5]");
  require(std::isfinite(eps) && eps > 0, "weight: eps must be positive");
  IterLogWeight w;
  w.k = k;
  w.eps = eps;
  w.x_min = 1.0L;
  if (k >= 3) {
    long double t = 1.0L;
    for (int i = 0; i < k - 2; ++i) t = std::exp(t);
    w.x_min = t;
  }
  return w;
}

long double weight(long double x, const IterLogWeight& w) {
  x = std::max(x, w.x_min);
  if (w.k == 2) return std::pow(x, 1.0L + w.eps);
  long double prod = x;
  long double l = x;
  for (int i = 1; i <= w.k - 3; ++i) {
    l = std::log(l);
    prod *= l;
  }
  l = std::log(l);
  return prod * std::pow(l, 1.0L + w.eps);
}

long double h_weight(long double x, const IterLogWeight& w) {
  const long double arg = x > 0 ? std::log(x) : w.x_min;
  return weight(std::max(arg, w.x_min), w);
}

WeightCondition weight_condition_check(const IterLogWeight& w, int levels,
                                       int points_per_octave) {
  require(levels >= 10 && levels <= 16000, "weight condition: L must be in [10, 16000]");
  require(points_per_octave >= 1, "weight condition: points per octave must be >= 1");
  WeightCondition c;
  for (int i = 0; i <= levels * points_per_octave; ++i) {
    const long double q = std::exp2(static_cast<long double>(i) / points_per_octave);
    c.ratio_bound = std::max(c.ratio_bound, h_weight(2.0L * q, w) / h_weight(q, w));
  }
  long double last_ten = 0;
  for (int l = 0; l <= levels; ++l) {
    const long double term = 1.0L / h_weight(std::exp2(static_cast<long double>(l)), w);
    c.tail_partial += term;
    if (l > levels - 10) last_ten += term;
  }
  c.cauchy_ok = last_ten < 1e-3L * c.tail_partial;
  return c;
}

std::vector<DivisorSeriesRow> divisor_series(std::span<const long double> grid,
                                             const IterLogWeight& w, const ApproxFunction& psi,
                                             std::uint64_t y, std::uint64_t z) {
  require(!grid.empty(), "series: empty grid");
  require(y >= 1 && z < y, "series: requires y >= 1 and 0 <= z < y");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]) && grid[i] >= 3, "series: grid values must be >= 3");
    if (i > 0) require(grid[i] > grid[i - 1], "series: grid must be increasing");
  }
  require(grid.back() <= static_cast<long double>(kMaxSieve), "series: grid max must be <= 1e8");

  const auto limit = static_cast<std::uint64_t>(std::floor(grid.back()));
  const SieveTable table = sieve(limit);

  std::vector<long double> g_term;  // 1/(F(log d)·d) by d
  const long double log2 = std::numbers::ln2_v<long double>;

  std::vector<DivisorSeriesRow> rows;
  DivisorSeriesRow acc;
  std::uint64_t n = z == 0 ? y : z;
  for (const long double x : grid) {
    const auto upto = static_cast<std::uint64_t>(std::floor(x));
    for (; n <= upto; n += y) {
      const std::uint32_t d = table.divisors(n);
      acc.S += 1.0L / d;
      if (n < kSeriesStart) continue;
      if (d >= g_term.size()) {
        for (std::size_t k = g_term.size(); k <= d; ++k) {
          g_term.push_back(k == 0 ? 0.0L
                                  : 1.0L / (weight(std::log(static_cast<long double>(k)), w) *
                                            static_cast<long double>(k)));
        }
      }
      const long double log_n = std::log(static_cast<long double>(n));
      const long double g = g_term[d];
      const long double h = 1.0L / (weight(log2 * std::log(log_n), w) * std::sqrt(log_n));
      const long double p = psi(n);
      acc.G += g;
      acc.H += h;
      acc.psiG += p * g;
      acc.psiH += p * h;
    }
    DivisorSeriesRow row = acc;
    row.x = x;
    const long double log_x = std::log(x);
    row.reference = x / (weight(std::log(log_x), w) * std::sqrt(log_x));
    row.ratio_G = row.G / row.reference;
    row.ratio_H = row.H / row.reference;
    rows.push_back(row);
  }
  return rows;
}

void write_series_csv(std::ostream& out, std::span<const DivisorSeriesRow> rows) {
  out << "x,G,H,psiG,psiH,reference,ratio_G,ratio_H\n";
  for (const auto& r : rows) {
    out << decimal18(r.x) << ',' << decimal18(r.G) << ',' << decimal18(r.H) << ','
        << decimal18(r.psiG) << ',' << decimal18(r.psiH) << ',' << decimal18(r.reference) << ','
        << decimal18(r.ratio_G) << ',' << decimal18(r.ratio_H) << '\n';
  }
}

}  // namespace sdlab
