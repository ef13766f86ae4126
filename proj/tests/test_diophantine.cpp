#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "sdlab/diophantine.hpp"
#include "sdlab/error.hpp"
#include "sdlab/rng.hpp"

using namespace sdlab;

namespace {

std::vector<std::uint64_t> qs_of(const std::vector<HitRecord>& hits) {
  std::vector<std::uint64_t> out;
  for (const auto& h : hits) out.push_back(h.q);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<std::pair<std::uint64_t, std::uint64_t>> pairs_of(const std::vector<HitRecord>& hits) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> s;
  for (const auto& h : hits) s.emplace(h.q, h.a);
  return s;
}

const std::vector<std::uint64_t> kFib100{1, 2, 3, 5, 8, 13, 21, 34, 55, 89};

TorusPoint golden() { return BetaSpec::golden().resolve(); }

}  // namespace

TEST(ContinuedFraction, Rational) {
  const auto cf = cf_expand(BetaSpec::parse("5/12"), 10);
  EXPECT_TRUE(cf.terminated);
  EXPECT_FALSE(cf.truncated);
  ASSERT_EQ(cf.quotients, (std::vector<BigInt>{0, 2, 2, 2}));
  const std::vector<std::pair<BigInt, BigInt>> conv{{0, 1}, {1, 2}, {2, 5}, {5, 12}};
  EXPECT_EQ(cf.convergents, conv);
}

TEST(ContinuedFraction, GoldenAllOnes) {
  const auto cf = cf_expand(BetaSpec::golden(), 150);
  EXPECT_TRUE(cf.truncated);
  EXPECT_FALSE(cf.precision_limited);
  ASSERT_EQ(cf.quotients.size(), 151u);
  EXPECT_EQ(cf.quotients[0], 0);
  for (std::size_t k = 1; k < cf.quotients.size(); ++k) ASSERT_EQ(cf.quotients[k], 1) << k;
}

TEST(ContinuedFraction, SqrtAndPeriodic) {
  // √7 − 2 = [0; 1, 1, 1, 4, 1, 1, 1, 4, ...]
  const auto cf = cf_expand(BetaSpec::sqrt_frac(7), 12);
  EXPECT_EQ(cf.quotients, (std::vector<BigInt>{0, 1, 1, 1, 4, 1, 1, 1, 4, 1, 1, 1, 4}));
  const auto periodic = cf_expand(BetaSpec::cf_periodic({3, 1}), 5);
  EXPECT_EQ(periodic.quotients, (std::vector<BigInt>{0, 3, 1, 3, 1, 3}));
}

TEST(ContinuedFraction, DeterminantIdentity) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    for (const auto& cf : {cf_expand(rng.torus_point(), 200), cf_expand(BetaSpec::sqrt_frac(2 + trial * 3), 60)}) {
      for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
        const auto& [p, q] = cf.convergents[k];
        const auto& [pp, qq] = cf.convergents[k - 1];
        ASSERT_EQ(p * qq - pp * q, (k % 2 == 1) ? 1 : -1);
        if (k >= 2) ASSERT_GT(q, qq);
      }
    }
  }
}

TEST(ContinuedFraction, DepthLimits) {
  EXPECT_THROW(cf_expand(BetaSpec::golden(), 0), ValidationError);
  EXPECT_THROW(cf_expand(BetaSpec::golden(), 201), ValidationError);
}

TEST(Hits, GoldenHalfOverQGivesFibonacci) {
  const auto psi = ApproxFunction::power(0.5L, 1);
  const auto t = TargetFamily::constant(0);
  EXPECT_EQ(qs_of(hits_brute(golden(), psi, t, 100)), kFib100);
  EXPECT_EQ(qs_of(hits_fast(golden(), psi, t, 100)), kFib100);
}

TEST(Hits, GoldenPointThreeOverQIsEmpty) {
  // q_k‖q_kβ‖ → 1/√5 ≈ 0.447 from both sides, so 0.3 is never reached.
  const auto psi = ApproxFunction::power(0.3L, 1);
  const auto t = TargetFamily::constant(0);
  EXPECT_TRUE(hits_brute(golden(), psi, t, 100).empty());
  EXPECT_TRUE(hits_fast(golden(), psi, t, 1000000).empty());
}

TEST(Hits, GoldenFastMillionMatchesConvergents) {
  const auto psi = ApproxFunction::power(0.5L, 1);
  const auto t = TargetFamily::constant(0);
  std::vector<std::uint64_t> fib{1, 2};
  while (fib.back() + fib[fib.size() - 2] <= 1000000) fib.push_back(fib.back() + fib[fib.size() - 2]);
  const auto hits = hits_fast(golden(), psi, t, 1000000);
  EXPECT_EQ(qs_of(hits), fib);
  EXPECT_EQ(qs_of(hits_brute(golden(), psi, t, 100000)), qs_of(hits_fast(golden(), psi, t, 100000)));
  for (const auto& h : hits) EXPECT_LT(h.distance, h.threshold);
}

TEST(Hits, WideArcsHitEveryQ) {
  // ψ ≡ 50 makes every arc at least half the circle for q ≤ 100
  const auto wide = ApproxFunction::table({50.0L});
  const auto hits = hits_brute(golden(), wide, TargetFamily::constant(0.3L), 60, {3, 1});
  for (std::uint64_t q = 1; q <= 60; q += 3) {
    EXPECT_TRUE(std::any_of(hits.begin(), hits.end(), [&](auto& h) { return h.q == q; })) << q;
  }
  EXPECT_EQ(pairs_of(hits), pairs_of(hits_fast(golden(), wide, TargetFamily::constant(0.3L), 60, {3, 1})));
}

TEST(Hits, RationalCoincidence) {
  const auto psi = ApproxFunction::power(0.3L, 1);
  const auto hits = hits_brute(BetaSpec::parse("1/4").resolve(), psi, TargetFamily::constant(0), 8);
  for (std::uint64_t q : {4u, 8u}) {
    auto it = std::find_if(hits.begin(), hits.end(), [&](auto& h) { return h.q == q; });
    ASSERT_NE(it, hits.end());
    EXPECT_EQ(it->distance, 0.0L);
  }
}

TEST(Hits, ResidueFilterIsSubset) {
  const auto psi = ApproxFunction::power(1.0L, 1);
  const auto t = TargetFamily::constant(0.37L);
  const TorusPoint beta = SplitMix64(17).torus_point();
  const auto all = hits_fast(beta, psi, t, 20000);
  const auto odd = hits_fast(beta, psi, t, 20000, {2, 1});
  std::vector<HitRecord> expected;
  std::copy_if(all.begin(), all.end(), std::back_inserter(expected), [](auto& h) { return h.q % 2 == 1; });
  EXPECT_EQ(pairs_of(odd), pairs_of(expected));
  EXPECT_EQ(pairs_of(odd), pairs_of(hits_brute(beta, psi, t, 20000, {2, 1})));
}

TEST(Hits, FastMatchesBruteWithMovingTargets) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const TorusPoint beta = rng.torus_point();
    const long double c = 0.2L + rng.uniform();
    const auto psi = ApproxFunction::power(c, 1);
    const auto t = trial % 2 == 0
                       ? TargetFamily::cosine(rng.uniform(), 3 * rng.uniform() - 1.5, c)
                       : TargetFamily::table({rng.uniform(), -rng.uniform()}, {1, -0.25L, 0.5L}, 2.0L, psi);
    const Residue res{1 + rng.between(0, 3), 0};
    const Residue residue{res.modulus, rng.between(0, res.modulus - 1)};
    EXPECT_EQ(pairs_of(hits_fast(beta, psi, t, 20000, residue, {2, 128})),
              pairs_of(hits_brute(beta, psi, t, 20000, residue)))
        << "trial " << trial;
  }
}

TEST(Hits, MonotoneInC) {
  const TorusPoint beta = SplitMix64(4).torus_point();
  const auto t = TargetFamily::constant(0.2L);
  const auto small = pairs_of(hits_fast(beta, ApproxFunction::power(0.4L, 1), t, 50000));
  const auto large = pairs_of(hits_fast(beta, ApproxFunction::power(0.8L, 1), t, 50000));
  EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
}

TEST(Hits, ConvergentDenominatorsAreHits) {
  const TorusPoint beta = SplitMix64(99).torus_point();
  const auto cf = cf_expand(beta, 30);
  const auto hits = qs_of(hits_fast(beta, ApproxFunction::power(1.0L, 1), TargetFamily::constant(0), 1000000));
  for (const auto& [p, q] : cf.convergents) {
    if (q > 1000000) break;
    EXPECT_TRUE(std::binary_search(hits.begin(), hits.end(), q.convert_to<std::uint64_t>())) << q;
  }
}

TEST(Hits, Limits) {
  const auto psi = ApproxFunction::power(0.5L, 1);
  const auto t = TargetFamily::constant(0);
  EXPECT_THROW(hits_brute(golden(), psi, t, kBruteMaxQ + 1), ValidationError);
  EXPECT_THROW(hits_fast(golden(), psi, t, kFastMaxQ + 1), ValidationError);
  // ψ(q) = 1/q³ at q = 1e6 is below the residual resolution.
  EXPECT_THROW(hits_fast(golden(), ApproxFunction::power(1, 3), t, 1000000), PrecisionError);
  // 1e9 · 2^-96 is far below 1e-6 of the threshold, 1e9 · 2^-64 is not
  EXPECT_NO_THROW(check_precision_floor(1000000000, 5e-10L, 96));
  EXPECT_THROW(check_precision_floor(1000000000, 5e-10L, 64), PrecisionError);
}

TEST(Critical, Form410GoldenIsFibonacci) {
  const auto hits = critical_hits(golden(), {Form::F410, 1, 0.5L}, 100);
  EXPECT_EQ(qs_of(hits), kFib100);
}

TEST(Critical, FormsOnGolden) {
  // brute force at 50 digits (mpmath)
  EXPECT_EQ(qs_of(critical_hits(golden(), {Form::F48, 1, 0.5L}, 20)), (std::vector<std::uint64_t>{1, 4, 17}));
  EXPECT_EQ(qs_of(critical_hits(golden(), {Form::F49, 1, 0.5L}, 30)), (std::vector<std::uint64_t>{1, 3, 11}));
  EXPECT_EQ(qs_of(critical_hits(golden(), {Form::F411, 1, 0.5L}, 30)), (std::vector<std::uint64_t>{1, 2, 7, 28}));
}

TEST(Critical, LargeConstantHitsEverything) {
  const auto hits = critical_hits(golden(), {Form::F48, 1, 100 / 2.0L + 1}, 100);
  EXPECT_EQ(hits.size(), 100u);
}

TEST(Critical, ArgumentMatchesDefinition) {
  const TorusPoint b = BetaSpec::parse("3/7").resolve();
  // (q − ½)·3/7 + ½ at q = 4: 3/2 + 1/2 = 2
  EXPECT_LT(critical_argument(b, Form::F49, 4).dist(), 1e-30L);
  EXPECT_NEAR(critical_argument(b, Form::F411, 4).dist(), 0.5L, 1e-30L);
  EXPECT_NEAR(critical_argument(b, Form::F48, 1).value(), 3.0L / 7 + 0.5L, 1e-18L);
  EXPECT_THROW(parse_form("412"), ValidationError);
  EXPECT_THROW((CriticalForm{Form::F48, 0.5L, 1}).validate(), ValidationError);
}

TEST(Critical, ThresholdIsStrictAndExact) {
  // β = 1/4, form 410, q = 2: ‖1/2‖ = 1/2, threshold c/q = 1/2 must not hit
  const TorusPoint b = BetaSpec::parse("1/4").resolve();
  const auto hits = qs_of(critical_hits(b, {Form::F410, 1, 1.0L}, 2));
  EXPECT_EQ(hits, (std::vector<std::uint64_t>{1}));
}

TEST(Reduce49, BaseCaseAndBijection) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rc = reduce_49(rng.torus_point(), 0.4L, 10000);
    EXPECT_TRUE(rc.bijection_ok);
    EXPECT_TRUE(rc.bracket_ok);
    EXPECT_TRUE(rc.unmatched.empty());
    for (std::size_t i = 0; i < rc.direct.size(); ++i) EXPECT_EQ(rc.reduced_exact[i], 2 * rc.direct[i] - 1);
  }
  const auto rc = reduce_49(golden(), 0.5L, 30);
  EXPECT_EQ(rc.direct, (std::vector<std::uint64_t>{1, 3, 11}));
  EXPECT_EQ(rc.reduced_exact.front(), 1u);
}

TEST(Reduce49, RationalThird) {
  // (q − ½)/3 + ½ within 0.4/q of an integer, mpmath brute force for q ≤ 30
  const auto rc = reduce_49(BetaSpec::parse("1/3").resolve(), 0.4L, 30);
  EXPECT_EQ(rc.direct, (std::vector<std::uint64_t>{1, 2, 5, 8, 11, 14, 17, 20, 23, 26, 29}));
  EXPECT_TRUE(rc.bijection_ok);
}

TEST(Csv, HitsHeader) {
  std::ostringstream out;
  const std::vector<HitRecord> hits{{5, 3, 0.0125L, 0.1L}};
  write_hits_csv(out, hits);
  EXPECT_EQ(out.str(), "q,a,distance,threshold\n5,3,0.0125,0.1\n");
}
