// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "sdlab/diophantine.hpp"
#include "sdlab/divisor_sums.hpp"
#include "sdlab/moving_target.hpp"
#include "sdlab/reduction_chain.hpp"
#include "sdlab/rng.hpp"
#include "sdlab/rubin_model.hpp"

using namespace sdlab;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// A random registered (ψ, targets) pair: constant, cosine or table targets.
std::pair<ApproxFunction, TargetFamily> random_family(SplitMix64& rng) {
  const long double c = 0.02L + 0.38L * static_cast<long double>(rng.uniform());
  switch (rng.between(0, 2)) {
    case 0:
      return {ApproxFunction::power(c, 1), TargetFamily::constant(4 * rng.uniform() - 2)};
    case 1: {
      const long double b = c * static_cast<long double>(4 * rng.uniform() - 2);
      return lemma_key_family(rng.uniform(), b, c);
    }
    default: {
      const ApproxFunction psi = rng.uniform() < 0.5
                                     ? ApproxFunction::power(c, 1 + 0.5L * rng.uniform())
                                     : ApproxFunction::log_damped(c, 2 * rng.uniform());
      std::vector<long double> gammas(1 + rng.between(0, 2));
      for (auto& g : gammas) g = rng.uniform();
      std::vector<long double> profile(1 + rng.between(0, 3));
      for (auto& p : profile) p = 2 * rng.uniform() - 1;
      return {psi, TargetFamily::table(gammas, profile, 1.5L * rng.uniform(), psi)};
    }
  }
}

Outcome criterion1() {
  std::uint64_t bad_identity = 0, bad_eta = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) bad_identity += !gcd_sum_identity_check(n).equal;
  const std::pair<std::uint64_t, std::uint64_t> classes[] = {{1, 0}, {2, 0}, {2, 1}, {3, 2}};
  for (const auto& [y, z] : classes) {
    for (std::uint64_t q = 1; q <= 10000; ++q) bad_eta += !eta(q, y, z).chain_ok;
  }
  return {bad_identity == 0 && bad_eta == 0,
          fmt("gcd identity failures %llu / 10000, eta chain failures %llu / 40000",
              (unsigned long long)bad_identity, (unsigned long long)bad_eta)};
}

Outcome criterion2() {
  SplitMix64 rng(2002);
  int tested = 0, failures = 0, draws = 0;
  while (tested < 1000) {
    ++draws;
    const auto [psi, t] = random_family(rng);
    const std::uint64_t q = rng.between(10, 10000);
    const SizeReport r = check_size(q, psi, t);
    if (!r.precondition_holds) continue;
    ++tested;
    if (!r.disjoint || !r.matches_2psi) ++failures;
  }
  return {failures == 0, fmt("%d / %d instances disjoint with m(E_q) = 2psi(q) exactly (%d draws)",
                             tested - failures, tested, draws)};
}

Outcome criterion3() {
  SplitMix64 rng(3003);
  int families = 0;
  std::uint64_t violations = 0, pairs = 0, skipped = 0;
  while (families < 20) {
    const auto [psi, t] = random_family(rng);
    if ((2 * t.c0() + 2) * psi(50) >= 1) continue;
    ++families;
    const OverlapSweep sw = overlap_sweep(50, 400, psi, t, true, 0);
    violations += sw.violations;
    pairs += sw.rows.size();
    skipped += sw.skipped;
  }
  return {violations == 0, fmt("%llu violations over %llu pairs in 20 families (%llu skipped)",
                               (unsigned long long)violations, (unsigned long long)pairs,
                               (unsigned long long)skipped)};
}

Outcome criterion4() {
  SplitMix64 rng(4004);
  int hit_mismatch = 0;
  std::size_t total_hits = 0;
  for (int i = 0; i < 20; ++i) {
    const TorusPoint beta = rng.torus_point();
    const auto [psi, t] = random_family(rng);
    const std::uint64_t y = rng.between(1, 4);
    const Residue res{y, rng.between(0, y - 1)};
    const auto fast = hits_fast(beta, psi, t, 100000, res, {0, 128});
    const auto brute = hits_brute(beta, psi, t, 100000, res);
    total_hits += brute.size();
    bool same = fast.size() == brute.size();
    for (std::size_t k = 0; same && k < fast.size(); ++k) {
      same = fast[k].q == brute[k].q && fast[k].a == brute[k].a;
    }
    hit_mismatch += !same;
  }
  int scan_mismatch = 0;
  for (int i = 0; i < 10; ++i) {
    const int n = static_cast<int>(rng.between(2, 6));
    const long double rho = -2 + 6 * static_cast<long double>(rng.uniform());
    const long double c = 0.5L + 4.5L * static_cast<long double>(rng.uniform());
    const RubinParams p = make_params(n, rho, rng.torus_point());
    const auto pruned = scan_small_divisors(p, c, 100000, {0, 128, true});
    const auto full = scan_small_divisors(p, c, 100000, {0, 128, false});
    bool same = pruned.size() == full.size();
    for (std::size_t k = 0; same && k < full.size(); ++k) same = pruned[k].j == full[k].j;
    scan_mismatch += !same;
  }
  return {hit_mismatch == 0 && scan_mismatch == 0,
          fmt("fast/brute mismatches %d / 20 (%zu hits), pruned/full mismatches %d / 10", hit_mismatch,
              total_hits, scan_mismatch)};
}

Outcome criterion5() {
  const int ns[] = {2, 3, 4};
  const long double rhos[] = {-1.0L, 0.5L, 2.0L, 3.0L};
  const long double cs[] = {0.01L, 0.1L};
  const auto grid = geometric_grid(10, 10000, 8);

  // measured threshold per (n, ρ, c) from one seeded sweep
  std::vector<std::optional<std::uint64_t>> thresholds;
  for (int n : ns) {
    for (long double rho : rhos) {
      for (long double c : cs) thresholds.push_back(chain_threshold(n, rho, c, grid, 55, 0).threshold);
    }
  }

  SplitMix64 rng(5005);
  int eligible = 0, violations = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t ni = i % 3, ri = (i / 3) % 4, ci = (i / 12) % 2;
    const auto& thr = thresholds[(ni * 4 + ri) * 2 + ci];
    const auto j = static_cast<std::uint64_t>(std::llround(std::pow(10.0L, 1 + 3 * rng.uniform())));
    const std::uint64_t q = 2 * j + static_cast<std::uint64_t>(ns[ni]) - 1;
    const ExactSolution s = construct_exact_solution(ns[ni], rhos[ri], j, rng.between(0, q - 1));
    const ChainReport rep = verify_chain(make_params(ns[ni], rhos[ri], s.beta), cs[ci], s.witness);
    if (!thr || j < *thr) continue;
    ++eligible;
    if (!rep.final_pass) {
      ++violations;
      std::cout << "  violation: n=" << ns[ni] << " rho=" << static_cast<double>(rhos[ri])
                << " c=" << static_cast<double>(cs[ci]) << " j=" << j << " step "
                << rep.steps[*rep.first_failure].name << '\n';
    }
  }
  int measured = 0;
  for (const auto& t : thresholds) measured += t.has_value();
  return {violations == 0 && eligible > 0,
          fmt("%d violations among %d witnesses above their threshold (of 50; %d / 24 thresholds within j <= 1e4)",
              violations, eligible, measured)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliRun {
  int code = 0;
  std::string csv;
  std::string json;
};

CliRun run_cli(std::vector<std::string> args, const fs::path& dir, const std::string& stem) {
  const fs::path csv = dir / (stem + ".csv");
  const fs::path js = dir / (stem + ".json");
  args.insert(args.end(), {"--out", csv.string(), "--summary", js.string(), "--threads", "0"});
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(args, out, err);
  if (r.code != 0) std::cout << "  cli error: " << err.str();
  r.csv = slurp(csv);
  r.json = slurp(js);
  return r;
}

Json summary_of(const CliRun& r) { return Json::parse(r.json, nullptr, true, true); }

long double real(const Json& j) { return std::stold(j.get<std::string>()); }

const std::vector<std::string> kMainArgs{"scan-f", "--samples", "200", "--n", "3", "--rho", "2.5",
                                         "--c", "1", "--jmax", "1000000", "--seed", "11"};
const std::vector<std::string> kCriticalArgs{"critical", "--samples", "100", "--form", "48", "--mu", "1",
                                             "--c", "0.5,1.0", "--qmax", "1000000", "--seed", "7"};
const std::vector<std::string> kContrastArgs{"critical", "--samples", "100", "--form", "48", "--mu", "1.5",
                                             "--c", "0.5", "--qmax", "1000000", "--seed", "7"};

Outcome criterion6(const fs::path& dir) {
  const CliRun r = run_cli(kMainArgs, dir, "main_sd");
  if (r.code != 0) return {false, "scan-f exited with " + std::to_string(r.code)};
  const Json st = summary_of(r)["stats"][0];
  const long double frac = real(st["fraction_with_hit"]);
  const long double mean = real(st["mean"]);
  return {frac >= 0.95L && mean >= 3 && mean <= 20,
          fmt("fraction with hit %.3Lf (>= 0.95), mean hits %.3Lf (in [3, 20]; (2/pi) ln 1e6 = %.2f)", frac,
              mean, 2 / M_PI * std::log(1e6))};
}

Outcome criterion7(const fs::path& dir) {
  const CliRun r = run_cli(kCriticalArgs, dir, "critical");
  const CliRun contrast = run_cli(kContrastArgs, dir, "contrast");
  if (r.code != 0 || contrast.code != 0) return {false, "critical exited with an error"};
  const Json s = summary_of(r);
  const long double frac = real(s["stats"][0]["fraction_with_hit"]);
  const bool dominates = s["monotone_in_c"].get<bool>();
  const long double median = real(summary_of(contrast)["stats"][0]["median"]);
  const long double mean = real(summary_of(contrast)["stats"][0]["mean"]);
  return {frac >= 0.95L && dominates && median <= 1,
          fmt("mu=1: fraction with hit %.3Lf (>= 0.95), c=1.0 dominates c=0.5 per sample: %s; "
              "mu=1.5: median %.1Lf (want 0 or 1), mean %.3Lf",
              frac, dominates ? "yes" : "no", median, mean)};
}

Outcome criterion8() {
  SplitMix64 rng(8008);
  int bad = 0;
  std::uint64_t direct = 0, boundary = 0, unmatched = 0;
  for (int i = 0; i < 20; ++i) {
    const ReductionCheck rc = reduce_49(rng.torus_point(), 0.1L + rng.uniform(), 100000);
    direct += rc.direct.size();
    boundary += rc.boundary;
    unmatched += rc.unmatched.size();
    bad += !(rc.unmatched.empty() && rc.bracket_ok && rc.bijection_ok);
  }
  return {bad == 0, fmt("%d / 20 beta failing; %llu direct hits, %llu unmatched, %llu in the boundary band", bad,
                        (unsigned long long)direct, (unsigned long long)unmatched,
                        (unsigned long long)boundary)};
}

Outcome criterion9() {
  const std::vector<long double> grid{1e5L, 1e6L, 1e7L};
  const auto w = IterLogWeight::make(3, 1);
  const auto psi = ApproxFunction::power(1, 1);
  bool ok = true;
  std::string detail;
  for (const auto& [y, z] : {std::pair<std::uint64_t, std::uint64_t>{1, 0}, {2, 1}}) {
    const auto rows = divisor_series(grid, w, psi, y, z);
    long double g_lo = INFINITY, g_hi = 0, h_lo = INFINITY, h_hi = 0;
    for (const auto& r : rows) {
      g_lo = std::min(g_lo, r.ratio_G);
      g_hi = std::max(g_hi, r.ratio_G);
      h_lo = std::min(h_lo, r.ratio_H);
      h_hi = std::max(h_hi, r.ratio_H);
    }
    const bool g_ok = g_hi / g_lo <= 4;
    const bool h_ok = h_hi / h_lo <= 4 && h_lo >= 0.25L && h_hi <= 4;
    ok = ok && g_ok && h_ok;
    detail += fmt("(y,z)=(%llu,%llu): G ratio in [%.3Lf, %.3Lf], H ratio in [%.3Lf, %.3Lf]; ",
                  (unsigned long long)y, (unsigned long long)z, g_lo, g_hi, h_lo, h_hi);
    if (y == 1) {
      const long double x = rows.back().x;
      const long double s = rows.back().S * std::sqrt(std::log(x)) / x;
      ok = ok && s >= 0.40L && s <= 0.70L;
      detail += fmt("S(1e7) sqrt(log x)/x = %.4Lf; ", s);
    }
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome criterion10(const fs::path& dir) {
  const std::pair<const std::vector<std::string>*, std::string> runs[] = {
      {&kMainArgs, "main_sd"}, {&kCriticalArgs, "critical"}, {&kContrastArgs, "contrast"}};
  int identical = 0;
  for (const auto& [args, stem] : runs) {
    const std::string csv = slurp(dir / (stem + ".csv"));
    const std::string js = slurp(dir / (stem + ".json"));
    const CliRun again = run_cli(*args, dir, stem);
    identical += !csv.empty() && again.csv == csv && again.json == js;
  }
  return {identical == 3, fmt("%d / 3 reruns byte-identical (CSV and JSON)", identical)};
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "sdlab_acceptance";
  fs::create_directories(dir);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, criterion5},
      {6, [&] { return criterion6(dir); }},
      {7, [&] { return criterion7(dir); }},
      {8, criterion8},
      {9, criterion9},
      {10, [&] { return criterion10(dir); }},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << fmt("%.1f", secs)
              << " s) " << o.detail << std::endl;
    failed += !o.pass;
  }
  fs::remove_all(dir);
  std::cout << (10 - failed) << " / 10 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
