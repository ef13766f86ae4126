#pragma once

// Step-by-step replay of the argument that turns an exact small solution of
//   ‖β/4 − (k + x)/Q + (B/Q²)·cos(4πk/Q)‖ < c/Q²,   Q = 2j + n − 1,
// with x = (ρ − 1)/4 and B = ρ(ρ − 1)/π into the two-sine bound
//   |j·sin π(jβ − r0) + ρ(ρ − 1)·sin π(jβ − r1)| ≤ 8πc.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/rubin_model.hpp"
#include "sdlab/torus.hpp"

namespace sdlab {

struct ChainWitness {
  std::uint64_t j = 0;
  std::uint64_t k = 0;
  std::int64_t m = 0;
  long double x = 0;
  long double b = 0;
};

struct ExactSolution {
  TorusPoint beta;
  ChainWitness witness;
  std::uint64_t k_requested = 0;  // k before advancing to a usable residue
};

/// β := 4·frac(v), v = (k + x)/Q − (B/Q²)·cos(4πk/Q), so that the scaled
/// inequality holds with left-hand side 0. When frac(v) ∉ (0, ¼) (or β would
/// be 0 or ½), k is advanced mod Q to the next usable value.
ExactSolution construct_exact_solution(int n, long double rho, std::uint64_t j, std::uint64_t k);

struct ChainStep {
  std::string name;
  long double lhs = 0;
  long double rhs = 0;
  bool pass = false;
  long double margin = 0;  // rhs − lhs
};

struct ChainReport {
  std::vector<ChainStep> steps;
  std::int64_t m = 0;              // integer actually used (best of the two nearest)
  std::optional<std::size_t> first_failure;
  std::optional<std::uint64_t> j_threshold;  // filled by chain_threshold sweeps
  bool final_pass = false;         // every step passes
};

/// Evaluates every step at 50 significant digits. Throws ValidationError
/// when the witness does not belong to p (x, B or k out of range).
ChainReport verify_chain(const RubinParams& p, long double c, const ChainWitness& w);

struct ThresholdSweep {
  std::vector<std::uint64_t> j_grid;
  std::vector<bool> passed;  // final_pass per grid point
  /// Smallest grid j from which every later grid point passes.
  std::optional<std::uint64_t> threshold;
};

/// Constructs exact solutions on `j_grid` (k = ⌊Q·u⌋ with u drawn from the
/// seeded generator) and records where the whole chain starts to pass.
ThresholdSweep chain_threshold(int n, long double rho, long double c,
                               std::span<const std::uint64_t> j_grid, std::uint64_t seed,
                               unsigned threads = 1);

/// Geometric grid from j_lo to j_hi with `per_decade` points per decade.
std::vector<std::uint64_t> geometric_grid(std::uint64_t j_lo, std::uint64_t j_hi, int per_decade);

}  // namespace sdlab
