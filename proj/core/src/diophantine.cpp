#include "sdlab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sdlab/error.hpp"
#include "sdlab/format.hpp"
#include "sdlab/parallel.hpp"

namespace sdlab {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

BigInt floor_of(const BigRational& x) { return floor_div(numerator(x), denominator(x)); }

void push_quotient(ContinuedFraction& cf, const BigInt& a) {
  cf.quotients.push_back(a);
  const std::size_t k = cf.convergents.size();
  const BigInt p1 = k >= 1 ? cf.convergents[k - 1].first : BigInt(1);
  const BigInt q1 = k >= 1 ? cf.convergents[k - 1].second : BigInt(0);
  const BigInt p2 = k >= 2 ? cf.convergents[k - 2].first : BigInt(k == 1 ? 1 : 0);
  const BigInt q2 = k >= 2 ? cf.convergents[k - 2].second : BigInt(k == 1 ? 0 : 1);
  cf.convergents.emplace_back(a * p1 + p2, a * q1 + q2);
}

ContinuedFraction expand_rational(BigRational x, unsigned depth) {
  ContinuedFraction cf;
  for (;;) {
    const BigInt a = floor_of(x);
    push_quotient(cf, a);
    const BigRational rest = x - BigRational(a);
    if (rest == 0) {
      cf.terminated = true;
      return cf;
    }
    if (cf.quotients.size() > depth) {
      cf.truncated = true;
      return cf;
    }
    x = 1 / rest;
  }
}

// Quotients shared by every point of [lo, hi]; stops at the first ambiguity.
std::vector<BigInt> expand_interval(BigRational lo, BigRational hi, unsigned depth) {
  std::vector<BigInt> out;
  while (out.size() <= depth) {
    const BigInt a = floor_of(lo);
    if (floor_of(hi) != a) break;
    out.push_back(a);
    const BigRational lo_rest = lo - BigRational(a);
    const BigRational hi_rest = hi - BigRational(a);
    if (lo_rest == 0) break;
    lo = 1 / hi_rest;
    hi = 1 / lo_rest;
  }
  return out;
}

std::uint64_t mod_u(i128 v, std::uint64_t q) {
  const i128 sq = static_cast<i128>(q);
  i128 r = v % sq;
  if (r < 0) r += sq;
  return static_cast<std::uint64_t>(r);
}

// Integer part and fraction of the form's argument.
struct Argument {
  std::uint64_t whole;
  u128 frac;
};

Argument form_argument(TorusPoint beta, Form form, std::uint64_t q) {
  Argument arg{};
  if (form == Form::F48 || form == Form::F410) {
    const WideProduct p = beta.multiply(q);
    arg = {p.whole, p.frac};
  } else {
    const WideProduct p = beta.multiply(2 * q - 1);
    arg = {p.whole >> 1, (p.frac >> 1) | (static_cast<u128>(p.whole & 1U) << 127)};
  }
  if (form == Form::F48 || form == Form::F49) {
    const u128 shifted = arg.frac + kHalfTurn;
    if (shifted < arg.frac) ++arg.whole;
    arg.frac = shifted;
  }
  return arg;
}

// Exact test dist_raw < threshold·2^128.
bool below_threshold(u128 dist_raw, long double threshold) {
  if (threshold > 0.5L) return true;
  const long double scaled = std::ldexp(threshold, 128);
  const auto floor_units = static_cast<u128>(scaled);
  if (dist_raw < floor_units) return true;
  return dist_raw == floor_units && static_cast<long double>(floor_units) != scaled;
}

long double window_radius(const TargetFamily& targets, long double psi_q) {
  return std::ceil((targets.c0() + 1.0L) * psi_q) + 1.0L;
}

void check_inputs(const ApproxFunction&, const TargetFamily&, std::uint64_t q_max,
                  const Residue& residue) {
  require(q_max >= 1, "q_max must be >= 1");
  residue.validate();
}

}  // namespace

ContinuedFraction cf_expand(const BetaSpec& beta, unsigned depth) {
  require(depth >= 1 && depth <= 200, "cf_expand: depth must be in [1, 200]");
  if (auto exact = beta.exact()) return expand_rational(*exact, depth);

  ContinuedFraction cf;
  if (beta.kind() == BetaKind::CfPeriodic) {
    push_quotient(cf, 0);
    const auto& period = beta.period();
    for (unsigned k = 0; k < depth; ++k) push_quotient(cf, period[k % period.size()]);
    cf.truncated = true;
    return cf;
  }

  // Golden and √D: bracket β between consecutive grid points and keep the
  // quotients on which both ends agree, refining until `depth` are certain.
  for (unsigned bits = 64 + 8 * depth; bits <= 65536; bits *= 2) {
    const BigInt lo = beta.scaled_floor(bits);
    const BigInt scale = BigInt(1) << bits;
    const auto qs = expand_interval(BigRational(lo, scale), BigRational(lo + 1, scale), depth);
    if (qs.size() > depth || bits * 2 > 65536) {
      for (std::size_t i = 0; i < qs.size() && i <= depth; ++i) push_quotient(cf, qs[i]);
      cf.truncated = qs.size() > depth;
      cf.precision_limited = !cf.truncated;
      return cf;
    }
  }
  return cf;
}

ContinuedFraction cf_expand(TorusPoint beta, unsigned depth) {
  require(depth >= 1 && depth <= 200, "cf_expand: depth must be in [1, 200]");
  return expand_rational(to_rational(beta), depth);
}

std::vector<HitRecord> hits_brute(TorusPoint beta, const ApproxFunction& psi,
                                  const TargetFamily& targets, std::uint64_t q_max,
                                  Residue residue) {
  check_inputs(psi, targets, q_max, residue);
  require(q_max <= kBruteMaxQ, "hits_brute: q_max exceeds the oracle limit 1e7");

  const BigRational exact = to_rational(beta);
  const Float50 b = Float50(numerator(exact)) / Float50(denominator(exact));
  std::vector<HitRecord> out;
  std::vector<std::int64_t> candidates;
  for (std::uint64_t q = residue.rem == 0 ? residue.modulus : residue.rem; q <= q_max;
       q += residue.modulus) {
    const long double psi_q = psi(q);
    const Float50 threshold = Float50(psi_q) / q;
    const long double w_max = window_radius(targets, psi_q);
    const auto sq = static_cast<std::int64_t>(q);

    candidates.clear();
    if (2.0L * w_max + 1.0L >= static_cast<long double>(q)) {
      for (std::int64_t a = 0; a < sq; ++a) candidates.push_back(a);
    } else {
      const Float50 center = boost::multiprecision::round(b * q - Float50(targets.gamma(q)));
      const auto c = center.convert_to<std::int64_t>();
      const auto w = static_cast<std::int64_t>(w_max);
      for (std::int64_t k = -w; k <= w; ++k) {
        std::int64_t a = (c + k) % sq;
        if (a < 0) a += sq;
        candidates.push_back(a);
      }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    }

    for (const std::int64_t a : candidates) {
      const Float50 val = b - (Float50(a) + Float50(targets.target(a, q))) / q;
      const Float50 d = abs(val - boost::multiprecision::round(val));
      if (d < threshold) {
        out.push_back({q, static_cast<std::uint64_t>(a), d.convert_to<long double>(),
                       threshold.convert_to<long double>()});
      }
    }
  }
  return out;
}

std::vector<HitRecord> hits_fast(TorusPoint beta, const ApproxFunction& psi,
                                 const TargetFamily& targets, std::uint64_t q_max,
                                 Residue residue, ScanOptions options) {
  check_inputs(psi, targets, q_max, residue);
  require(q_max <= kFastMaxQ, "hits_fast: q_max must be <= 1e9");
  const long double psi_min = psi(q_max);
  check_precision_floor(q_max, psi_min, options.precision_bits);
  if (psi_min < 0x1p-40L) {
    throw PrecisionError("hits_fast: psi(q_max) = " + decimal18(psi_min) +
                         " is below the 2^-40 resolution of the residual arithmetic");
  }
  const TorusPoint b = beta.truncated(options.precision_bits);

  // Blocks are indexed by position in the residue class.
  const std::uint64_t first = residue.rem == 0 ? residue.modulus : residue.rem;
  if (first > q_max) return {};
  const std::uint64_t count = (q_max - first) / residue.modulus + 1;

  return parallel_ranges<HitRecord>(0, count - 1, options.threads, [&](std::uint64_t lo,
                                                                        std::uint64_t hi) {
    std::vector<HitRecord> out;
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t idx = lo; idx <= hi; ++idx) {
      const std::uint64_t q = first + idx * residue.modulus;
      const long double psi_q = psi(q);
      const long double w_max = window_radius(targets, psi_q);
      const WideProduct p = b.multiply(q);
      const long double gamma_q = targets.gamma(q);
      const long double g_floor = std::floor(gamma_q);
      const long double g = gamma_q - g_floor;
      const long double f = raw_to_real(p.frac);
      // qβ − γ_q = (I − G) + (f − g)
      const i128 base = static_cast<i128>(p.whole) - static_cast<i128>(g_floor);

      candidates.clear();
      if (2.0L * w_max + 1.0L >= static_cast<long double>(q)) {
        for (std::uint64_t a = 0; a < q; ++a) candidates.push_back(a);
      } else {
        const i128 center = base + static_cast<i128>(std::llround(f - g));
        const auto w = static_cast<std::int64_t>(w_max);
        for (std::int64_t k = -w; k <= w; ++k) candidates.push_back(mod_u(center + k, q));
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      }

      const auto lq = static_cast<long double>(q);
      for (const std::uint64_t a : candidates) {
        // Signed residue of (I − G − a) mod q in (−q/2, q/2].
        std::uint64_t r = mod_u(base - static_cast<i128>(a), q);
        i128 signed_r = r;
        if (2 * r > q) signed_r -= static_cast<i128>(q);
        const long double eps = targets.epsilon(static_cast<std::int64_t>(a), q);
        const long double t = static_cast<long double>(signed_r) + (f - g - eps);
        const long double m = std::fmod(std::fabs(t), lq);
        const long double residual = std::min(m, lq - m);
        if (residual < psi_q) out.push_back({q, a, residual / lq, psi_q / lq});
      }
    }
    return out;
  });
}

void CriticalForm::validate() const {
  require(std::isfinite(mu) && mu >= 1, "critical form: mu must be >= 1");
  require(std::isfinite(c) && c > 0, "critical form: c must be positive");
}

Form parse_form(std::string_view text) {
  if (text == "48") return Form::F48;
  if (text == "49") return Form::F49;
  if (text == "410") return Form::F410;
  if (text == "411") return Form::F411;
  throw ValidationError("form must be one of 48, 49, 410, 411");
}

TorusPoint critical_argument(TorusPoint beta, Form form, std::uint64_t q) {
  require(q >= 1, "critical_argument: q must be >= 1");
  return TorusPoint::from_raw(form_argument(beta, form, q).frac);
}

std::vector<HitRecord> critical_hits(TorusPoint beta, const CriticalForm& form,
                                     std::uint64_t q_max, ScanOptions options) {
  form.validate();
  require(q_max >= 1, "q_max must be >= 1");
  require(q_max <= kFastMaxQ, "critical_hits: q_max must be <= 1e9");
  const long double scale = form.form == Form::F49 || form.form == Form::F411 ? 2.0L : 1.0L;
  const long double min_threshold =
      form.c / std::pow(static_cast<long double>(q_max), form.mu);
  check_precision_floor(static_cast<std::uint64_t>(scale * static_cast<long double>(q_max)),
                        min_threshold, options.precision_bits);
  const TorusPoint b = beta.truncated(options.precision_bits);

  return parallel_ranges<HitRecord>(1, q_max, options.threads, [&](std::uint64_t lo,
                                                                     std::uint64_t hi) {
    std::vector<HitRecord> out;
    for (std::uint64_t q = lo; q <= hi; ++q) {
      const long double threshold =
          form.mu == 1.0L ? form.c / static_cast<long double>(q)
                          : form.c / std::pow(static_cast<long double>(q), form.mu);
      const Argument arg = form_argument(b, form.form, q);
      const TorusPoint point = TorusPoint::from_raw(arg.frac);
      if (!below_threshold(point.dist_raw(), threshold)) continue;
      const std::uint64_t nearest = arg.whole + (arg.frac >= kHalfTurn ? 1 : 0);
      out.push_back({q, nearest % q, point.dist(), threshold});
    }
    return out;
  });
}

ReductionCheck reduce_49(TorusPoint beta, long double c, std::uint64_t q_max) {
  require(std::isfinite(c) && c > 0, "reduce_49: c must be positive");
  require(q_max >= 1 && q_max <= kFastMaxQ / 2, "reduce_49: q_max must be in [1, 5e8]");
  ReductionCheck rc;
  rc.beta_half = beta.half();
  const TorusPoint half = TorusPoint::from_raw(kHalfTurn);

  for (std::uint64_t q = 1; q <= q_max; ++q) {
    const std::uint64_t qp = 2 * q - 1;
    const auto lq = static_cast<long double>(q);
    const auto lqp = static_cast<long double>(qp);

    const u128 direct_dist = critical_argument(beta, Form::F49, q).dist_raw();
    const long double direct_thr = c / lq;
    const bool in_direct = below_threshold(direct_dist, direct_thr);
    if (in_direct) rc.direct.push_back(q);

    const u128 reduced_dist = (rc.beta_half.times(qp) + half).dist_raw();
    const long double exact_thr = 2.0L * c / (lqp + 1.0L);
    const bool in_exact = below_threshold(reduced_dist, exact_thr);
    if (in_exact) rc.reduced_exact.push_back(qp);
    if (below_threshold(reduced_dist, c / lqp)) rc.reduced_low.push_back(qp);
    if (below_threshold(reduced_dist, 2.0L * c / lqp)) rc.reduced_high.push_back(qp);

    if (in_direct != in_exact) {
      const long double d = raw_to_real(reduced_dist);
      if (std::fabs(d - exact_thr) <= 1e-9L * exact_thr) {
        ++rc.boundary;
      } else {
        rc.unmatched.push_back(q);
      }
    }
  }

  std::vector<std::uint64_t> image;
  image.reserve(rc.direct.size());
  for (auto q : rc.direct) image.push_back(2 * q - 1);
  rc.bijection_ok = rc.unmatched.empty() && rc.boundary == 0 && image == rc.reduced_exact;
  rc.bracket_ok =
      std::includes(image.begin(), image.end(), rc.reduced_low.begin(), rc.reduced_low.end()) &&
      std::includes(rc.reduced_high.begin(), rc.reduced_high.end(), image.begin(), image.end());
  return rc;
}

void check_precision_floor(std::uint64_t q_max, long double min_threshold, int bits) {
  require(bits >= 64 && bits <= 128, "precision must be in [64, 128] bits");
  const long double positional = std::ldexp(static_cast<long double>(q_max), -bits);
  if (!(positional <= 1e-6L * min_threshold)) {
    throw PrecisionError("precision floor exceeded: q_max*2^-" + std::to_string(bits) + " = " +
                         decimal18(positional) + " is not below 1e-6 of the smallest threshold " +
                         decimal18(min_threshold));
  }
}

void write_hits_csv(std::ostream& out, std::span<const HitRecord> hits) {
  out << "q,a,distance,threshold\n";
  for (const auto& h : hits) {
    out << h.q << ',' << h.a << ',' << decimal18(h.distance) << ',' << decimal18(h.threshold)
        << '\n';
  }
}

}  // namespace sdlab
