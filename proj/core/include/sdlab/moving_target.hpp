#pragma once

// E_q = ∪_a I_{q,a}, the arcs of radius ψ(q)/q around (a + γ_{a,q})/q, and
// finite checks of their size, pairwise overlap and density in open sets.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdlab/targets.hpp"
#include "sdlab/torus.hpp"

namespace sdlab {

/// Center of I_{q,a} on the grid.
TorusPoint arc_center(std::uint64_t q, std::uint64_t a, const TargetFamily& targets);

/// Canonical E_q; the full circle once ψ(q)/q ≥ ½.
IntervalUnion build_eq_set(std::uint64_t q, const ApproxFunction& psi,
                           const TargetFamily& targets);

struct SizeReport {
  long double precondition = 0;  // (2C0 + 2)·ψ(q)
  bool precondition_holds = false;
  bool disjoint = false;         // arcs pairwise disjoint, checked on the sorted centers
  long double measure = 0;
  MeasureUnits units = 0;
  bool matches_2psi = false;     // units == q · (2 · grid radius), i.e. m(E_q) = 2ψ(q) on the grid
};

SizeReport check_size(std::uint64_t q, const ApproxFunction& psi, const TargetFamily& targets);

struct OverlapReport {
  std::uint64_t q = 0;
  std::uint64_t r = 0;
  long double measure_q = 0;
  long double measure_r = 0;
  long double measure_intersection = 0;
  long double delta_max = 0;  // Δ = 2·max(ψ(q)/q, ψ(r)/r)
  long double delta_min = 0;  // δ = 2·min(ψ(q)/q, ψ(r)/r)
  std::uint64_t gcd_qr = 0;
  long double bound = 0;      // 4(C0 + 1)(m_q·m_r + gcd(q, r)/q · m_q)
  bool satisfied = false;
};

/// Requires 1 ≤ r < q.
OverlapReport overlap_report(std::uint64_t q, std::uint64_t r, const ApproxFunction& psi,
                             const TargetFamily& targets);

struct OverlapSweep {
  std::vector<OverlapReport> rows;  // ordered by (q, r)
  std::uint64_t violations = 0;
  std::uint64_t skipped = 0;        // pairs where E_q or E_r fails the disjointness precondition
  /// Smallest q with no violation at any q' ≥ q in the sweep.
  std::uint64_t q_star = 0;
};

/// All pairs r_min ≤ r < q ≤ q_max. With `only_precondition`, pairs whose
/// E_q or E_r fails (2C0 + 2)ψ < 1 are skipped.
OverlapSweep overlap_sweep(std::uint64_t r_min, std::uint64_t q_max, const ApproxFunction& psi,
                           const TargetFamily& targets, bool only_precondition = true,
                           unsigned threads = 1);

struct DensityReport {
  std::uint64_t q = 0;
  long double ratio = 0;  // m(E_q ∩ U) / (m(E_q)·m(U))
  bool passes_half = false;
};

DensityReport density_report(std::uint64_t q, const IntervalUnion& u, const ApproxFunction& psi,
                             const TargetFamily& targets);

struct DensitySweep {
  std::vector<DensityReport> rows;
  /// Smallest q from which every later q in the sweep passes.
  std::optional<std::uint64_t> q0;
};

DensitySweep density_sweep(const IntervalUnion& u, std::uint64_t q_from, std::uint64_t q_to,
                           const ApproxFunction& psi, const TargetFamily& targets,
                           unsigned threads = 1);

/// ψ(q) = c/q with the cosine target γ_{a,q} = x − (B/q)·cos(4πa/q), C0 = |B|/c.
std::pair<ApproxFunction, TargetFamily> lemma_key_family(long double x, long double b,
                                                         long double c);

/// m(U ∩ ∪{E_q : Q0 ≤ q ≤ Q1, q ≡ z (mod y)}), exact on the grid.
MeasureUnits tail_union_units(std::uint64_t q0, std::uint64_t q1, const ApproxFunction& psi,
                              const TargetFamily& targets, const IntervalUnion& u,
                              Residue residue = {});
long double tail_union_measure(std::uint64_t q0, std::uint64_t q1, const ApproxFunction& psi,
                               const TargetFamily& targets, const IntervalUnion& u,
                               Residue residue = {});

/// CSV `q,r,gcd,measure_q,measure_r,measure_intersection,bound,satisfied`.
void write_overlap_csv(std::ostream& out, std::span<const OverlapReport> rows);

}  // namespace sdlab
