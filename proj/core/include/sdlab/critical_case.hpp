#pragma once

// Sampled-β experiments: hit counts of the critical inequalities and of the
// small-divisor inequality |F(β, j)| < c over a list of constants c.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sdlab/diophantine.hpp"
#include "sdlab/targets.hpp"
#include "sdlab/torus.hpp"

namespace sdlab {

struct ExperimentConfig {
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  std::uint64_t q_max = 1000;
  std::vector<long double> c_list{0.5L};
  Form form = Form::F410;
  long double mu = 1.0L;
  Residue residue;
  std::optional<TorusPoint> beta_override;  // every sample uses this β
  unsigned threads = 1;
  int precision_bits = 128;

  void validate() const;
};

struct FExperimentConfig {
  int n = 3;
  long double rho = 2.5L;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  std::uint64_t j_max = 1000;
  std::vector<long double> c_list{1.0L};
  std::optional<TorusPoint> beta_override;
  unsigned threads = 1;
  int precision_bits = 128;

  void validate() const;
};

struct SampleResult {
  std::uint64_t index = 0;
  TorusPoint beta;
  std::vector<std::uint64_t> counts;                     // per c
  std::vector<std::optional<std::uint64_t>> first_hit;   // per c
};

struct CStats {
  long double c = 0;
  long double fraction_with_hit = 0;
  long double mean = 0;
  long double median = 0;
  std::uint64_t no_hit = 0;
  /// first_hit_decades[d] counts samples whose first hit lies in [10^d, 10^(d+1)).
  std::vector<std::uint64_t> first_hit_decades;
};

struct ExperimentSummary {
  std::vector<long double> c_list;
  std::vector<SampleResult> samples;
  std::vector<CStats> stats;  // per c
  bool monotone_in_c = false; // per-sample counts nondecreasing along increasing c
};

/// β_i is the i-th torus_point() of SplitMix64(seed) unless overridden.
std::vector<TorusPoint> sample_betas(std::uint64_t samples, std::uint64_t seed);

ExperimentSummary run_critical_experiment(const ExperimentConfig& cfg);
ExperimentSummary run_f_experiment(const FExperimentConfig& cfg);

/// CSV `sample_index,beta,c,hit_count,first_hit_q`; first_hit_q is empty when
/// the sample has no hit.
void write_samples_csv(std::ostream& out, const ExperimentSummary& summary);

}  // namespace sdlab
