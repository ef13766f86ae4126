#include "sdlab/critical_case.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sdlab/error.hpp"
#include "sdlab/format.hpp"
#include "sdlab/parallel.hpp"
#include "sdlab/rng.hpp"
#include "sdlab/rubin_model.hpp"

namespace sdlab {

namespace {

void validate_c_list(const std::vector<long double>& cs) {
  require(!cs.empty(), "c list must be nonempty");
  for (auto c : cs) require(std::isfinite(c) && c > 0, "every c must be positive");
}

SampleResult tally(std::uint64_t index, TorusPoint beta,
                   const std::vector<std::vector<std::uint64_t>>& hits_per_c) {
  SampleResult s;
  s.index = index;
  s.beta = beta;
  for (const auto& hits : hits_per_c) {
    s.counts.push_back(hits.size());
    s.first_hit.push_back(hits.empty() ? std::nullopt : std::optional(hits.front()));
  }
  return s;
}

ExperimentSummary summarize(std::vector<long double> c_list, std::vector<SampleResult> samples) {
  ExperimentSummary sum;
  sum.c_list = std::move(c_list);
  sum.samples = std::move(samples);
  const auto total = static_cast<long double>(sum.samples.size());
  for (std::size_t ci = 0; ci < sum.c_list.size(); ++ci) {
    CStats st;
    st.c = sum.c_list[ci];
    std::vector<std::uint64_t> counts;
    std::uint64_t with_hit = 0;
    long double acc = 0;
    for (const auto& s : sum.samples) {
      counts.push_back(s.counts[ci]);
      acc += static_cast<long double>(s.counts[ci]);
      if (const auto& f = s.first_hit[ci]) {
        ++with_hit;
        const auto decade = static_cast<std::size_t>(std::floor(std::log10(static_cast<long double>(*f))));
        if (st.first_hit_decades.size() <= decade) st.first_hit_decades.resize(decade + 1, 0);
        ++st.first_hit_decades[decade];
      } else {
        ++st.no_hit;
      }
    }
    std::sort(counts.begin(), counts.end());
    const std::size_t mid = counts.size() / 2;
    st.median = counts.size() % 2 == 1
                    ? static_cast<long double>(counts[mid])
                    : (static_cast<long double>(counts[mid - 1]) + static_cast<long double>(counts[mid])) / 2.0L;
    st.mean = acc / total;
    st.fraction_with_hit = static_cast<long double>(with_hit) / total;
    sum.stats.push_back(std::move(st));
  }

  std::vector<std::size_t> order(sum.c_list.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sum.c_list[a] < sum.c_list[b]; });
  sum.monotone_in_c = true;
  for (const auto& s : sum.samples) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (s.counts[order[i]] < s.counts[order[i - 1]]) sum.monotone_in_c = false;
    }
  }
  return sum;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(samples >= 1, "samples must be >= 1");
  require(q_max >= 1 && q_max <= kFastMaxQ, "q_max must be in [1, 1e9]");
  validate_c_list(c_list);
  require(std::isfinite(mu) && mu >= 1, "mu must be >= 1");
  residue.validate();
}

void FExperimentConfig::validate() const {
  require(samples >= 1, "samples must be >= 1");
  require(j_max >= 1 && j_max <= kMaxJ, "j_max must be in [1, 1e9]");
  require(n >= 2, "n must be >= 2");
  require(std::isfinite(rho), "rho must be finite");
  require(rho != 0.0L && rho != 1.0L, "rho in {0, 1} is the critical case; use the critical experiment");
  validate_c_list(c_list);
}

std::vector<TorusPoint> sample_betas(std::uint64_t samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<TorusPoint> out;
  out.reserve(samples);
  for (std::uint64_t i = 0; i < samples; ++i) out.push_back(rng.torus_point());
  return out;
}

ExperimentSummary run_critical_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TorusPoint> betas = sample_betas(cfg.samples, cfg.seed);
  if (cfg.beta_override) std::fill(betas.begin(), betas.end(), *cfg.beta_override);

  auto samples = parallel_indexed<SampleResult>(betas.size(), cfg.threads, [&](std::size_t i) {
    std::vector<std::vector<std::uint64_t>> per_c;
    for (const long double c : cfg.c_list) {
      const CriticalForm form{cfg.form, cfg.mu, c};
      std::vector<std::uint64_t> qs;
      for (const auto& h : critical_hits(betas[i], form, cfg.q_max, {1, cfg.precision_bits})) {
        if (cfg.residue.contains(h.q)) qs.push_back(h.q);
      }
      per_c.push_back(std::move(qs));
    }
    return tally(i, betas[i], per_c);
  });
  return summarize(cfg.c_list, std::move(samples));
}

ExperimentSummary run_f_experiment(const FExperimentConfig& cfg) {
  cfg.validate();
  check_f_precision(cfg.j_max, cfg.precision_bits);
  std::vector<TorusPoint> betas = sample_betas(cfg.samples, cfg.seed);
  if (cfg.beta_override) std::fill(betas.begin(), betas.end(), *cfg.beta_override);

  auto samples = parallel_indexed<SampleResult>(betas.size(), cfg.threads, [&](std::size_t i) {
    const RubinParams p = make_params(cfg.n, cfg.rho, betas[i]);
    std::vector<std::vector<std::uint64_t>> per_c;
    for (const long double c : cfg.c_list) {
      std::vector<std::uint64_t> js;
      for (const auto& h : scan_small_divisors(p, c, cfg.j_max, {1, cfg.precision_bits, true})) {
        js.push_back(h.j);
      }
      per_c.push_back(std::move(js));
    }
    return tally(i, betas[i], per_c);
  });
  return summarize(cfg.c_list, std::move(samples));
}

void write_samples_csv(std::ostream& out, const ExperimentSummary& summary) {
  out << "sample_index,beta,c,hit_count,first_hit_q\n";
  for (const auto& s : summary.samples) {
    for (std::size_t ci = 0; ci < summary.c_list.size(); ++ci) {
      out << s.index << ',' << decimal18(s.beta.value()) << ',' << decimal18(summary.c_list[ci])
          << ',' << s.counts[ci] << ',';
      if (s.first_hit[ci]) out << *s.first_hit[ci];
      out << '\n';
    }
  }
}

}  // namespace sdlab
