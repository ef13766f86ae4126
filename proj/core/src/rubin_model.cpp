#include "sdlab/rubin_model.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sdlab/error.hpp"
#include "sdlab/format.hpp"
#include "sdlab/parallel.hpp"

namespace sdlab {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

BigRational exact_real(long double x) {
  if (x == 0) return BigRational(0);
  int exp = 0;
  const long double mant = std::frexp(std::fabs(x), &exp);
  BigRational r(BigInt(static_cast<std::uint64_t>(std::ldexp(mant, 64))));
  if (x < 0) r = -r;
  const int shift = exp - 64;
  if (shift >= 0) return r * BigRational(BigInt(1) << shift);
  return r / BigRational(BigInt(1) << -shift);
}

long double to_ld(const BigRational& r) {
  return static_cast<long double>(r.convert_to<boost::multiprecision::cpp_bin_float_double_extended>());
}

// u0 = jβ − r0 = Qβ/2 − (ρ−1)/2 with Q = 2j + n − 1, reduced into [0, 2).
long double reduced_u0(const RubinParams& p, std::uint64_t j) {
  const std::uint64_t q = 2 * j + static_cast<std::uint64_t>(p.n) - 1;
  const WideProduct w = p.beta.multiply(q);
  const long double half_q_beta =
      (static_cast<long double>(w.whole & 3U) + raw_to_real(w.frac)) / 2.0L;
  long double u = std::fmod(half_q_beta - (p.rho - 1.0L) / 2.0L, 2.0L);
  if (u < 0) u += 2.0L;
  return u;
}

long double evaluate(const RubinParams& p, std::uint64_t j, long double u0) {
  const long double u1 = u0 + p.beta.value() + 0.5L;
  const long double k = p.coupling();
  const long double second = k == 0 ? 0.0L : k * std::sin(kPi * u1);
  return static_cast<long double>(j) * std::sin(kPi * u0) + second;
}

}  // namespace

RubinParams make_params(int n, long double rho, TorusPoint beta) {
  require(n >= 2 && n <= 1'000'000, "n must be in [2, 1e6]");
  require(std::isfinite(rho), "rho must be finite");
  require(beta.raw() != 0, "beta must not be 0 or 1");
  require(beta.raw() != kHalfTurn, "beta must not be 1/2");
  RubinParams p;
  p.n = n;
  p.rho = rho;
  p.beta = beta;
  p.theta = beta.value() * kPi;
  p.t = std::cos(p.theta);
  const BigRational b = to_rational(beta);
  p.r0_exact = (exact_real(rho) - 1 - b * n + b) / 2;
  p.r1_exact = p.r0_exact - (b + BigRational(1, 2));
  p.r0 = to_ld(p.r0_exact);
  p.r1 = to_ld(p.r1_exact);
  p.critical = rho == 0.0L || rho == 1.0L;
  p.beta_text = "raw:" + to_string(beta.raw());
  return p;
}

RubinParams make_params(int n, long double rho, const BetaSpec& beta) {
  if (auto exact = beta.exact()) {
    require(*exact != BigRational(1, 2), "beta must not be 1/2");
  }
  RubinParams p = make_params(n, rho, beta.resolve());
  p.beta_text = beta.describe();
  return p;
}

long double f_value(const RubinParams& p, std::uint64_t j) {
  require(j >= 1 && j <= kMaxJ, "j must be in [1, 1e9]");
  return evaluate(p, j, reduced_u0(p, j));
}

long double frac_distance(const RubinParams& p, std::uint64_t j) {
  require(j >= 1 && j <= kMaxJ, "j must be in [1, 1e9]");
  return dist_nearest(reduced_u0(p, j));
}

long double model_multiplier(const RubinParams& p, std::uint64_t j) {
  return f_value(p, j) / std::pow(static_cast<long double>(j), p.rho + 1.0L);
}

void check_f_precision(std::uint64_t j_max, int bits) {
  require(bits >= 64 && bits <= 128, "precision must be in [64, 128] bits");
  const auto j = static_cast<long double>(j_max);
  const long double err = kPi * j * (std::ldexp(2.0L * j, -bits) + 0x1p-62L);
  if (err > 1e-6L) {
    throw PrecisionError("precision floor exceeded: F error bound " + decimal18(err) +
                         " at j_max = " + std::to_string(j_max) + " with " +
                         std::to_string(bits) + " bits");
  }
}

std::vector<SmallDivisorHit> scan_small_divisors(const RubinParams& p, long double c,
                                                 std::uint64_t j_max, FScanOptions options) {
  require(std::isfinite(c) && c > 0, "c must be positive");
  require(j_max >= 1 && j_max <= kMaxJ, "j_max must be in [1, 1e9]");
  check_f_precision(j_max, options.precision_bits);
  RubinParams q = p;
  q.beta = p.beta.truncated(options.precision_bits);
  const long double reach = c + std::fabs(p.coupling());

  return parallel_ranges<SmallDivisorHit>(
      1, j_max, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<SmallDivisorHit> out;
        for (std::uint64_t j = lo; j <= hi; ++j) {
          const long double u0 = reduced_u0(q, j);
          const long double d = dist_nearest(u0);
          if (options.prune && d > reach / (2.0L * static_cast<long double>(j)) + 1e-9L) continue;
          const long double f = evaluate(q, j, u0);
          if (std::fabs(f) < c) out.push_back({j, f, d});
        }
        return out;
      });
}

void write_f_hits_csv(std::ostream& out, std::span<const SmallDivisorHit> hits) {
  out << "j,f_value,frac_distance\n";
  for (const auto& h : hits) {
    out << h.j << ',' << decimal18(h.f_value) << ',' << decimal18(h.frac_distance) << '\n';
  }
}

}  // namespace sdlab
