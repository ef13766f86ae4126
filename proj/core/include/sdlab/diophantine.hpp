#pragma once

// Continued fractions, inhomogeneous approximation hits with
// residue-restricted denominators, and the critical-case inequalities
//   ‖qβ + ½‖, ‖(q − ½)β + ½‖, ‖qβ‖, ‖(q − ½)β‖  <  c / q^μ.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdlab/beta.hpp"
#include "sdlab/targets.hpp"
#include "sdlab/torus.hpp"

namespace sdlab {

struct ContinuedFraction {
  std::vector<BigInt> quotients;                      // a0; a1, a2, ...
  std::vector<std::pair<BigInt, BigInt>> convergents;  // (p_k, q_k)
  bool terminated = false;         // exact rational expansion completed
  bool truncated = false;          // depth reached while more quotients exist
  bool precision_limited = false;  // stopped because β was not known precisely enough
};

/// Expands β to at most `depth` quotients after a0 (depth in [1, 200]).
ContinuedFraction cf_expand(const BetaSpec& beta, unsigned depth);
/// Expands the grid value raw/2^128 exactly.
ContinuedFraction cf_expand(TorusPoint beta, unsigned depth);

struct HitRecord {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  long double distance = 0;   // ‖β − (a + γ_{a,q})/q‖
  long double threshold = 0;  // ψ(q)/q
};

struct ScanOptions {
  unsigned threads = 1;
  int precision_bits = 128;
};

inline constexpr std::uint64_t kBruteMaxQ = 10'000'000;
inline constexpr std::uint64_t kFastMaxQ = 1'000'000'000;

/// Oracle: every (a, q), q ≡ z (mod y), q ≤ q_max, with
/// ‖β − (a + γ_{a,q})/q‖ < ψ(q)/q, evaluated in 50-digit binary floating
/// point over the candidate window a = round(qβ − γ_q) + w,
/// |w| ≤ ⌈(C0 + 1)ψ(q)⌉ + 1. Sorted by (q, a).
std::vector<HitRecord> hits_brute(TorusPoint beta, const ApproxFunction& psi,
                                  const TargetFamily& targets, std::uint64_t q_max,
                                  Residue residue = {});

/// Same hit set as hits_brute, using the wide fixed-point product for qβ and
/// O(1) work per q. Throws PrecisionError when the working resolution cannot
/// decide the predicate at q_max.
std::vector<HitRecord> hits_fast(TorusPoint beta, const ApproxFunction& psi,
                                 const TargetFamily& targets, std::uint64_t q_max,
                                 Residue residue = {}, ScanOptions options = {});

enum class Form { F48 = 48, F49 = 49, F410 = 410, F411 = 411 };

struct CriticalForm {
  Form form = Form::F410;
  long double mu = 1.0L;
  long double c = 1.0L;

  void validate() const;
};

Form parse_form(std::string_view text);

/// Value of the form's argument for this q, as a point of R/Z; its dist() is
/// the left-hand side of the inequality.
TorusPoint critical_argument(TorusPoint beta, Form form, std::uint64_t q);

/// All q ≤ q_max satisfying the selected inequality. HitRecord::a holds the
/// nearest integer to the argument, reduced mod q.
std::vector<HitRecord> critical_hits(TorusPoint beta, const CriticalForm& form,
                                     std::uint64_t q_max, ScanOptions options = {});

/// Direct form-4.9 hits against the odd-denominator reformulation
/// ‖q'β' + ½‖ < c'/q' with β' = β/2 and q' = 2q − 1.
struct ReductionCheck {
  TorusPoint beta_half;
  std::vector<std::uint64_t> direct;          // q with ‖(q − ½)β + ½‖ < c/q
  std::vector<std::uint64_t> reduced_exact;   // odd q' with ‖q'β' + ½‖ < 2c/(q' + 1)
  std::vector<std::uint64_t> reduced_low;     // odd q' with ‖q'β' + ½‖ < c/q'
  std::vector<std::uint64_t> reduced_high;    // odd q' with ‖q'β' + ½‖ < 2c/q'
  std::vector<std::uint64_t> unmatched;       // q where the routes disagree off the boundary band
  std::uint64_t boundary = 0;                 // disagreements inside the boundary band
  bool bijection_ok = false;  // q ↦ 2q − 1 maps direct onto reduced_exact
  bool bracket_ok = false;    // reduced_low ⊆ image(direct) ⊆ reduced_high
};

ReductionCheck reduce_49(TorusPoint beta, long double c, std::uint64_t q_max);

/// Throws PrecisionError unless the positional error of qβ on a `bits`-bit
/// grid, q_max·2^-bits, stays below 1e-6·min_threshold (thresholds measured
/// in units of qβ).
void check_precision_floor(std::uint64_t q_max, long double min_threshold, int bits);

/// CSV with header `q,a,distance,threshold`, 18 significant digits.
void write_hits_csv(std::ostream& out, std::span<const HitRecord> hits);

}  // namespace sdlab
