#include "sdlab/moving_target.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "sdlab/error.hpp"
#include "sdlab/format.hpp"
#include "sdlab/parallel.hpp"

namespace sdlab {

namespace {

struct Arcs {
  bool full = false;
  u128 radius = 0;
  std::vector<TorusPoint> centers;
};

Arcs make_arcs(std::uint64_t q, const ApproxFunction& psi, const TargetFamily& targets) {
  require(q >= 1, "q must be >= 1");
  Arcs arcs;
  const long double radius = psi(q) / static_cast<long double>(q);
  if (radius >= 0.5L) {
    arcs.full = true;
    return arcs;
  }
  arcs.radius = radius_units(radius);
  arcs.centers.reserve(q);
  for (std::uint64_t a = 0; a < q; ++a) arcs.centers.push_back(arc_center(q, a, targets));
  return arcs;
}

MeasureUnits to_units(u128 v) {
  return MeasureUnits(static_cast<std::uint64_t>(v >> 64)) << 64 |
         MeasureUnits(static_cast<std::uint64_t>(v));
}

IntervalUnion to_union(const Arcs& arcs) {
  if (arcs.full) return IntervalUnion::full_circle();
  std::vector<Segment> segs;
  segs.reserve(arcs.centers.size() + 1);
  for (auto c : arcs.centers) append_arc_segments(TorusInterval(c, arcs.radius), segs);
  return IntervalUnion::from_segments(std::move(segs));
}

OverlapReport fill_overlap(std::uint64_t q, std::uint64_t r, const IntervalUnion& eq,
                           long double measure_q, const IntervalUnion& er, long double measure_r,
                           const ApproxFunction& psi, long double c0) {
  OverlapReport rep;
  rep.q = q;
  rep.r = r;
  rep.measure_q = measure_q;
  rep.measure_r = measure_r;
  rep.measure_intersection = eq.intersect(er).measure();
  const long double sq = psi(q) / static_cast<long double>(q);
  const long double sr = psi(r) / static_cast<long double>(r);
  rep.delta_max = 2.0L * std::max(sq, sr);
  rep.delta_min = 2.0L * std::min(sq, sr);
  rep.gcd_qr = std::gcd(q, r);
  rep.bound = 4.0L * (c0 + 1.0L) *
              (rep.measure_q * rep.measure_r +
               static_cast<long double>(rep.gcd_qr) / static_cast<long double>(q) * rep.measure_q);
  rep.satisfied = rep.measure_intersection <= rep.bound;
  return rep;
}

}  // namespace

TorusPoint arc_center(std::uint64_t q, std::uint64_t a, const TargetFamily& targets) {
  const long double gamma_q = targets.gamma(q);
  const long double g_floor = std::floor(gamma_q);
  const long double g = gamma_q - g_floor;
  const auto sq = static_cast<i128>(q);
  i128 shifted = (static_cast<i128>(a) + static_cast<i128>(g_floor)) % sq;
  if (shifted < 0) shifted += sq;
  const long double offset =
      (g + targets.epsilon(static_cast<std::int64_t>(a), q)) / static_cast<long double>(q);
  return TorusPoint::from_raw(fixed_ratio(static_cast<std::uint64_t>(shifted), q)) +
         TorusPoint::from_real(offset);
}

IntervalUnion build_eq_set(std::uint64_t q, const ApproxFunction& psi,
                           const TargetFamily& targets) {
  return to_union(make_arcs(q, psi, targets));
}

SizeReport check_size(std::uint64_t q, const ApproxFunction& psi, const TargetFamily& targets) {
  SizeReport rep;
  const long double psi_q = psi(q);
  rep.precondition = (2.0L * targets.c0() + 2.0L) * psi_q;
  rep.precondition_holds = rep.precondition < 1.0L;

  Arcs arcs = make_arcs(q, psi, targets);
  const IntervalUnion u = to_union(arcs);
  rep.units = u.measure_units();
  rep.measure = u.measure();
  if (arcs.full) {
    rep.disjoint = false;
    rep.matches_2psi = false;
    return rep;
  }

  // Closed arcs of radius R are disjoint iff every circular gap between
  // consecutive centers exceeds 2R.
  auto& cs = arcs.centers;
  std::sort(cs.begin(), cs.end());
  const MeasureUnits width = to_units(arcs.radius) * 2;
  rep.disjoint = true;
  for (std::size_t i = 0; cs.size() > 1 && i < cs.size() && rep.disjoint; ++i) {
    const u128 gap = cs[(i + 1) % cs.size()].raw() - cs[i].raw();
    if (gap == 0 || to_units(gap) <= width) rep.disjoint = false;
  }
  rep.matches_2psi = rep.units == width * q;
  return rep;
}

OverlapReport overlap_report(std::uint64_t q, std::uint64_t r, const ApproxFunction& psi,
                             const TargetFamily& targets) {
  require(r >= 1 && r < q, "overlap: requires 1 <= r < q");
  const IntervalUnion eq = build_eq_set(q, psi, targets);
  const IntervalUnion er = build_eq_set(r, psi, targets);
  return fill_overlap(q, r, eq, eq.measure(), er, er.measure(), psi, targets.c0());
}

OverlapSweep overlap_sweep(std::uint64_t r_min, std::uint64_t q_max, const ApproxFunction& psi,
                           const TargetFamily& targets, bool only_precondition,
                           unsigned threads) {
  require(r_min >= 1 && r_min < q_max, "overlap sweep: requires 1 <= r_min < q_max");
  const std::size_t count = q_max - r_min + 1;
  struct Built {
    IntervalUnion set;
    long double measure = 0;
    bool ok = false;
  };
  const auto built = parallel_indexed<Built>(count, threads, [&](std::size_t i) {
    const std::uint64_t q = r_min + i;
    Built b;
    b.set = build_eq_set(q, psi, targets);
    b.measure = b.set.measure();
    b.ok = (2.0L * targets.c0() + 2.0L) * psi(q) < 1.0L;
    return b;
  });

  const auto per_q = parallel_indexed<std::vector<OverlapReport>>(
      count - 1, threads, [&](std::size_t i) {
        const std::uint64_t q = r_min + 1 + i;
        const Built& bq = built[q - r_min];
        std::vector<OverlapReport> rows;
        for (std::uint64_t r = r_min; r < q; ++r) {
          const Built& br = built[r - r_min];
          if (only_precondition && !(bq.ok && br.ok)) continue;
          rows.push_back(fill_overlap(q, r, bq.set, bq.measure, br.set, br.measure, psi,
                                      targets.c0()));
        }
        return rows;
      });

  OverlapSweep sweep;
  sweep.q_star = r_min + 1;
  for (std::size_t i = 0; i < per_q.size(); ++i) {
    const std::uint64_t q = r_min + 1 + i;
    sweep.skipped += (q - r_min) - per_q[i].size();
    for (const auto& rep : per_q[i]) {
      if (!rep.satisfied) {
        ++sweep.violations;
        sweep.q_star = q + 1;
      }
      sweep.rows.push_back(rep);
    }
  }
  return sweep;
}

DensityReport density_report(std::uint64_t q, const IntervalUnion& u, const ApproxFunction& psi,
                             const TargetFamily& targets) {
  require(!u.is_empty(), "density: U must be nonempty");
  const IntervalUnion eq = build_eq_set(q, psi, targets);
  const long double m_eq = eq.measure();
  require(m_eq > 0, "density: E_q has zero measure");
  DensityReport rep;
  rep.q = q;
  rep.ratio = eq.intersect(u).measure() / (m_eq * u.measure());
  rep.passes_half = rep.ratio >= 0.5L;
  return rep;
}

DensitySweep density_sweep(const IntervalUnion& u, std::uint64_t q_from, std::uint64_t q_to,
                           const ApproxFunction& psi, const TargetFamily& targets,
                           unsigned threads) {
  require(q_from >= 1 && q_from <= q_to, "density sweep: requires 1 <= q_from <= q_to");
  DensitySweep sweep;
  sweep.rows = parallel_indexed<DensityReport>(q_to - q_from + 1, threads, [&](std::size_t i) {
    return density_report(q_from + i, u, psi, targets);
  });
  for (std::size_t i = sweep.rows.size(); i-- > 0;) {
    if (!sweep.rows[i].passes_half) break;
    sweep.q0 = sweep.rows[i].q;
  }
  return sweep;
}

std::pair<ApproxFunction, TargetFamily> lemma_key_family(long double x, long double b,
                                                         long double c) {
  ApproxFunction psi = ApproxFunction::power(c, 1.0L);
  return {psi, TargetFamily::cosine(x, b, c)};
}

MeasureUnits tail_union_units(std::uint64_t q0, std::uint64_t q1, const ApproxFunction& psi,
                              const TargetFamily& targets, const IntervalUnion& u,
                              Residue residue) {
  require(q0 >= 1 && q0 <= q1, "tail union: requires 1 <= Q0 <= Q1");
  residue.validate();
  std::vector<Segment> segs;
  for (std::uint64_t q = q0; q <= q1; ++q) {
    if (!residue.contains(q)) continue;
    const IntervalUnion eq = build_eq_set(q, psi, targets);
    if (eq.is_full()) return u.measure_units();
    segs.insert(segs.end(), eq.segments().begin(), eq.segments().end());
  }
  return IntervalUnion::from_segments(std::move(segs)).intersect(u).measure_units();
}

long double tail_union_measure(std::uint64_t q0, std::uint64_t q1, const ApproxFunction& psi,
                               const TargetFamily& targets, const IntervalUnion& u,
                               Residue residue) {
  return units_to_real(tail_union_units(q0, q1, psi, targets, u, residue));
}

void write_overlap_csv(std::ostream& out, std::span<const OverlapReport> rows) {
  out << "q,r,gcd,measure_q,measure_r,measure_intersection,bound,satisfied\n";
  for (const auto& r : rows) {
    out << r.q << ',' << r.r << ',' << r.gcd_qr << ',' << decimal18(r.measure_q) << ','
        << decimal18(r.measure_r) << ',' << decimal18(r.measure_intersection) << ','
        << decimal18(r.bound) << ',' << (r.satisfied ? "true" : "false") << '\n';
  }
}

}  // namespace sdlab
