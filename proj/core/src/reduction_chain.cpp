#include "sdlab/reduction_chain.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sdlab/error.hpp"
#include "sdlab/parallel.hpp"
#include "sdlab/rng.hpp"

namespace sdlab {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

const Float50& pi50() {
  static const Float50 pi = boost::math::constants::pi<Float50>();
  return pi;
}

Float50 from_rational(const BigRational& r) {
  return Float50(numerator(r)) / Float50(denominator(r));
}

TorusPoint grid_point(const Float50& frac) {
  const BigInt raw = static_cast<BigInt>(floor(boost::multiprecision::ldexp(frac, 128)));
  const BigInt mask = (BigInt(1) << 64) - 1;
  const auto hi = static_cast<std::uint64_t>(raw >> 64);
  const auto lo = static_cast<std::uint64_t>(raw & mask);
  return TorusPoint::from_raw((static_cast<u128>(hi) << 64) | lo);
}

long double ld(const Float50& x) { return x.convert_to<long double>(); }

}  // namespace

ExactSolution construct_exact_solution(int n, long double rho, std::uint64_t j, std::uint64_t k) {
  require(n >= 2 && n <= 1'000'000, "n must be in [2, 1e6]");
  require(std::isfinite(rho), "rho must be finite");
  require(j >= 1 && j <= kMaxJ, "j must be in [1, 1e9]");
  const std::uint64_t q = 2 * j + static_cast<std::uint64_t>(n) - 1;
  require(q >= 3, "2j + n - 1 must be >= 3");
  require(k < q, "k must lie in [0, 2j + n - 1)");

  const Float50 r(rho);
  const Float50 x = (r - 1) / 4;
  const Float50 b = r * (r - 1) / pi50();
  const Float50 fq(q);
  for (std::uint64_t step = 0; step < q; ++step) {
    const std::uint64_t kk = (k + step) % q;
    const Float50 v = (Float50(kk) + x) / fq - b / (fq * fq) * cos(4 * pi50() * kk / fq);
    const Float50 whole = floor(v);
    const Float50 frac = v - whole;
    if (!(frac > 0 && frac < Float50(0.25))) continue;
    const TorusPoint beta = grid_point(4 * frac);
    if (beta.raw() == 0 || beta.raw() == kHalfTurn) continue;
    ExactSolution s;
    s.beta = beta;
    s.k_requested = k;
    s.witness = {j, kk, -whole.convert_to<std::int64_t>(), ld(x), ld(b)};
    return s;
  }
  throw ValidationError("no k in [0, Q) gives a usable beta");
}

ChainReport verify_chain(const RubinParams& p, long double c, const ChainWitness& w) {
  require(std::isfinite(c) && c > 0, "c must be positive");
  require(w.j >= 1 && w.j <= kMaxJ, "witness j must be in [1, 1e9]");
  const std::uint64_t q = 2 * w.j + static_cast<std::uint64_t>(p.n) - 1;
  require(w.k < q, "inconsistent witness: k outside [0, 2j + n - 1)");
  const long double x_expected = (p.rho - 1.0L) / 4.0L;
  const long double b_expected = p.coupling() / std::numbers::pi_v<long double>;
  require(std::fabs(w.x - x_expected) <= 1e-15L * (1.0L + std::fabs(x_expected)),
          "inconsistent witness: x != (rho - 1)/4");
  require(std::fabs(w.b - b_expected) <= 1e-15L * (1.0L + std::fabs(b_expected)),
          "inconsistent witness: B != rho(rho - 1)/pi");

  const Float50& pi = pi50();
  const Float50 beta = from_rational(to_rational(p.beta));
  const Float50 rho(p.rho);
  const Float50 kc = rho * (rho - 1);
  const Float50 abs_k = abs(kc);
  const Float50 fj(w.j);
  const Float50 fq(q);
  const Float50 fk(w.k);
  const Float50 cc(c);
  const Float50 r0 = from_rational(p.r0_exact);
  const Float50 r1 = from_rational(p.r1_exact);

  const Float50 cos_k = cos(4 * pi * fk / fq);
  const Float50 base = (rho - 1 + 4 * fk) / fq;
  const Float50 v4 = base - 4 * kc / (pi * fq * fq) * cos_k;

  // m enters only existentially; take the better of the two nearest integers.
  const Float50 m_floor = floor((beta - v4) / 4);
  Float50 m = m_floor;
  if (abs(beta - v4 - 4 * (m_floor + 1)) < abs(beta - v4 - 4 * m_floor)) m = m_floor + 1;

  const Float50 sin_shift = sin(pi * (beta + Float50(0.5)));  // = cos βπ
  const Float50 eps2 = cos_k - cos(beta * pi);
  const Float50 c_rho = abs_k / pi;
  const Float50 a = 6 * cc + c_rho;
  const Float50 delta = fj * beta - r0 - 2 * fk - 2 * m * fq;
  const Float50 sin0 = sin(pi * (fj * beta - r0));
  const Float50 sin1 = sin(pi * (fj * beta - r1));

  ChainReport rep;
  rep.m = m.convert_to<std::int64_t>();
  auto add = [&](const char* name, const Float50& lhs, const Float50& rhs) {
    ChainStep s;
    s.name = name;
    s.lhs = ld(lhs);
    s.rhs = ld(rhs);
    s.pass = lhs <= rhs;
    s.margin = ld(rhs - lhs);
    if (!s.pass && !rep.first_failure) rep.first_failure = rep.steps.size();
    rep.steps.push_back(std::move(s));
  };

  add("lemma_key_scaled", abs(beta - v4 - 4 * m), 4 * cc / (fj * fj));
  add("cos_shift", abs(cos_k - cos(beta * pi - pi * (rho - 1) / fq)),
      (4 * pi * cc + abs_k) / (fj * fj));
  add("cos_replace", abs(eps2), (pi * abs(rho - 1) / 2 + 4 * pi * cc + abs_k) / fj);
  add("cos_error_scaled", fj * fj * 4 * abs_k / (pi * fq * fq) * abs(eps2), cc);
  add("bound_5c", abs(beta - base + 4 * kc / (pi * fq * fq) * sin_shift - 4 * m),
      5 * cc / (fj * fj));
  add("times_denominator",
      abs(fq * beta - (rho - 1 + 4 * fk) + 4 * kc / (pi * fq) * sin_shift - 4 * m * fq),
      10 * cc / fj);
  add("coefficient", abs(4 * kc / fq - 2 * kc / fj), cc / fj);
  add("bound_12c",
      abs(fq * beta - (rho - 1 + 4 * fk) + 2 * kc / (pi * fj) * sin_shift - 4 * m * fq),
      12 * cc / fj);
  add("half", abs(delta + kc / (pi * fj) * sin_shift), 6 * cc / fj);
  add("jbeta_r0", abs(delta), a / fj);
  add("taylor", abs(sin(pi * delta) - pi * delta), pi * pi * pi * a * a * a / (6 * fj * fj * fj));
  add("one_sine", abs(sin0 + kc / fj * sin_shift), 7 * pi * cc / fj);
  add("second_sine", abs(kc * sin1 - kc * sin_shift) / fj,
      abs_k * pi * a / (fj * fj) * (1 + pi * a / (2 * fj)));
  add("final", abs(fj * sin0 + kc * sin1), 8 * pi * cc);

  rep.final_pass = !rep.first_failure.has_value();
  return rep;
}

ThresholdSweep chain_threshold(int n, long double rho, long double c,
                               std::span<const std::uint64_t> j_grid, std::uint64_t seed,
                               unsigned threads) {
  require(!j_grid.empty(), "chain threshold: empty j grid");
  ThresholdSweep sweep;
  sweep.j_grid.assign(j_grid.begin(), j_grid.end());
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> ks;
  for (auto j : j_grid) {
    const std::uint64_t q = 2 * j + static_cast<std::uint64_t>(n) - 1;
    ks.push_back(std::min<std::uint64_t>(q - 1, static_cast<std::uint64_t>(
                                                    rng.uniform() * static_cast<double>(q))));
  }
  const auto passed = parallel_indexed<char>(j_grid.size(), threads, [&](std::size_t i) {
    const ExactSolution s = construct_exact_solution(n, rho, j_grid[i], ks[i]);
    const RubinParams p = make_params(n, rho, s.beta);
    return static_cast<char>(verify_chain(p, c, s.witness).final_pass);
  });
  sweep.passed.assign(passed.begin(), passed.end());
  for (std::size_t i = passed.size(); i-- > 0;) {
    if (!passed[i]) break;
    sweep.threshold = j_grid[i];
  }
  return sweep;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t j_lo, std::uint64_t j_hi, int per_decade) {
  require(j_lo >= 1 && j_lo <= j_hi, "grid: requires 1 <= lo <= hi");
  require(per_decade >= 1, "grid: points per decade must be >= 1");
  std::vector<std::uint64_t> grid;
  for (int i = 0;; ++i) {
    const long double v =
        static_cast<long double>(j_lo) * std::pow(10.0L, static_cast<long double>(i) / per_decade);
    const auto j = static_cast<std::uint64_t>(std::llround(v));
    if (j > j_hi) break;
    if (grid.empty() || j > grid.back()) grid.push_back(j);
  }
  if (grid.back() != j_hi) grid.push_back(j_hi);
  return grid;
}

}  // namespace sdlab
