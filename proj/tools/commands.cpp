#include "commands.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sdlab/critical_case.hpp"
#include "sdlab/diophantine.hpp"
#include "sdlab/divisor_sums.hpp"
#include "sdlab/error.hpp"
#include "sdlab/format.hpp"
#include "sdlab/moving_target.hpp"
#include "sdlab/reduction_chain.hpp"
#include "sdlab/rubin_model.hpp"

namespace sdlab::cli {

namespace {

using Json = nlohmann::ordered_json;

// Reals travel as 18-digit decimal strings so artifacts are bit-stable.
std::string num(long double x) { return decimal18(x); }

void write_json(Artifact& art, const Json& j) { art.stream() << j.dump(2) << '\n'; }

IntervalUnion parse_u(const std::string& text) {
  if (text == "full") return IntervalUnion::full_circle();
  std::istringstream in(text);
  long double center = 0, radius = 0;
  char comma = 0;
  require(static_cast<bool>(in >> center >> comma >> radius) && comma == ',' && in.eof(),
          "U must be 'full' or 'center,radius'");
  require(radius > 0 && radius < 0.5L, "U radius must be in (0, 1/2)");
  return IntervalUnion::from_arc(TorusInterval::from_real(TorusPoint::from_real(center), radius));
}

Residue residue_of(std::uint64_t y, std::uint64_t z) {
  const Residue r{y, z};
  r.validate();
  return r;
}

Json residue_json(const Residue& r) { return Json{{"y", r.modulus}, {"z", r.rem}}; }

struct PsiTargets {
  std::string psi = "power:1,1";
  std::string targets = "constant:0";
};

void add_psi_targets(CLI::App* sub, PsiTargets& pt) {
  sub->add_option("--psi", pt.psi, "approximation function: power:c,mu | log:c,sigma | table:v1,...");
  sub->add_option("--targets", pt.targets,
                  "moving targets: constant:x | cosine:x,B | table:g1;g2/p1;p2/C0");
}

std::pair<ApproxFunction, TargetFamily> resolve(const PsiTargets& pt) {
  ApproxFunction psi = ApproxFunction::parse(pt.psi);
  TargetFamily t = TargetFamily::parse(pt.targets, psi);
  return {std::move(psi), std::move(t)};
}

Command& add_command(std::vector<Command>& cmds, CLI::App& app, const std::string& name,
                     const std::string& help, bool with_summary) {
  Command cmd;
  cmd.app = app.add_subcommand(name, help);
  cmd.common = std::make_unique<Common>();
  Common& c = *cmd.common;
  cmd.app->add_option("--out", c.out, "primary artifact path ('-' for stdout)");
  if (with_summary) cmd.app->add_option("--summary", c.summary, "JSON summary path");
  cmd.app->add_option("--threads", c.threads, "worker threads (0 = one per core)");
  cmd.app->add_option("--precision", c.precision, "working precision in bits")
      ->check(CLI::Range(96, 128));
  cmd.app->add_option("--seed", c.seed, "seed for sampled or rand inputs");
  cmd.app->add_option("--config", c.config, "file of 'key = value' lines; flags win");
  cmds.push_back(std::move(cmd));
  return cmds.back();
}

Json stats_json(const ExperimentSummary& s) {
  Json stats = Json::array();
  for (const auto& st : s.stats) {
    stats.push_back({{"c", num(st.c)},
                     {"fraction_with_hit", num(st.fraction_with_hit)},
                     {"mean", num(st.mean)},
                     {"median", num(st.median)},
                     {"no_hit", st.no_hit},
                     {"first_hit_decades", st.first_hit_decades}});
  }
  return stats;
}

void add_scan_f(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    int n = 3;
    long double rho = 2.5L;
    std::string beta;
    std::vector<long double> c{1.0L};
    std::uint64_t jmax = 1000;
    std::uint64_t samples = 0;
    bool no_prune = false;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "scan-f", "small divisors |F(beta, j)| < c", true);
  cmd.app->add_option("--n", o->n, "dimension parameter n >= 2");
  cmd.app->add_option("--rho", o->rho, "real order rho");
  cmd.app->add_option("--beta", o->beta, "beta (required without --samples; overrides sampling)");
  cmd.app->add_option("--c", o->c, "constant(s) c, comma separated")->delimiter(',');
  cmd.app->add_option("--jmax", o->jmax, "largest j");
  cmd.app->add_option("--samples", o->samples, "number of sampled beta (0 = single beta)");
  cmd.app->add_flag("--no-prune", o->no_prune, "evaluate every j");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    if (o->samples == 0) {
      require(!o->beta.empty(), "scan-f: --beta is required unless --samples is given");
      require(o->c.size() == 1, "scan-f: a single-beta scan takes exactly one c");
      check_f_precision(o->jmax, c.precision);
      const RubinParams p = make_params(o->n, o->rho, BetaSpec::parse(o->beta, c.seed));
      const auto hits =
          scan_small_divisors(p, o->c[0], o->jmax, {c.threads, c.precision, !o->no_prune});
      Artifact csv(c.out, out, "#", *self.app);
      write_f_hits_csv(csv.stream(), hits);
      if (!c.summary.empty()) {
        Artifact js(c.summary, out, "//", *self.app);
        Json j{{"command", "scan-f"},
               {"beta", p.beta_text},
               {"beta_value", num(p.beta.value())},
               {"r0", num(p.r0)},
               {"r1", num(p.r1)},
               {"c", num(o->c[0])},
               {"j_max", o->jmax},
               {"hit_count", hits.size()}};
        j["first_hit"] = hits.empty() ? Json(nullptr) : Json(hits.front().j);
        write_json(js, j);
      }
      return;
    }
    FExperimentConfig cfg;
    cfg.n = o->n;
    cfg.rho = o->rho;
    cfg.samples = o->samples;
    cfg.seed = c.seed;
    cfg.j_max = o->jmax;
    cfg.c_list = o->c;
    cfg.threads = c.threads;
    cfg.precision_bits = c.precision;
    if (!o->beta.empty()) cfg.beta_override = BetaSpec::parse(o->beta, c.seed).resolve();
    const ExperimentSummary s = run_f_experiment(cfg);
    Artifact csv(c.out, out, "#", *self.app);
    write_samples_csv(csv.stream(), s);
    if (!c.summary.empty()) {
      Artifact js(c.summary, out, "//", *self.app);
      write_json(js, {{"command", "scan-f"},
                      {"n", cfg.n},
                      {"rho", num(cfg.rho)},
                      {"samples", cfg.samples},
                      {"seed", cfg.seed},
                      {"j_max", cfg.j_max},
                      {"stats", stats_json(s)},
                      {"monotone_in_c", s.monotone_in_c}});
    }
  };
}

void add_critical(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    std::uint64_t samples = 100;
    std::uint64_t qmax = 10000;
    std::vector<long double> c{0.5L};
    std::string form = "48";
    long double mu = 1.0L;
    std::uint64_t y = 1;
    std::uint64_t z = 0;
    std::string beta;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "critical", "critical-case inequality hit counts over sampled beta", true);
  cmd.app->add_option("--samples", o->samples, "number of sampled beta");
  cmd.app->add_option("--qmax", o->qmax, "largest q");
  cmd.app->add_option("--c", o->c, "constant(s) c, comma separated")->delimiter(',');
  cmd.app->add_option("--form", o->form, "48 | 49 | 410 | 411");
  cmd.app->add_option("--mu", o->mu, "exponent mu >= 1 in c/q^mu");
  cmd.app->add_option("--y", o->y, "residue modulus");
  cmd.app->add_option("--z", o->z, "residue class");
  cmd.app->add_option("--beta", o->beta, "use this beta for every sample");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    ExperimentConfig cfg;
    cfg.samples = o->samples;
    cfg.seed = c.seed;
    cfg.q_max = o->qmax;
    cfg.c_list = o->c;
    cfg.form = parse_form(o->form);
    cfg.mu = o->mu;
    cfg.residue = residue_of(o->y, o->z);
    cfg.threads = c.threads;
    cfg.precision_bits = c.precision;
    if (!o->beta.empty()) cfg.beta_override = BetaSpec::parse(o->beta, c.seed).resolve();
    const ExperimentSummary s = run_critical_experiment(cfg);
    Artifact csv(c.out, out, "#", *self.app);
    write_samples_csv(csv.stream(), s);
    if (!c.summary.empty()) {
      Artifact js(c.summary, out, "//", *self.app);
      write_json(js, {{"command", "critical"},
                      {"form", static_cast<int>(cfg.form)},
                      {"mu", num(cfg.mu)},
                      {"samples", cfg.samples},
                      {"seed", cfg.seed},
                      {"q_max", cfg.q_max},
                      {"residue", residue_json(cfg.residue)},
                      {"stats", stats_json(s)},
                      {"monotone_in_c", s.monotone_in_c}});
    }
  };
}

void add_limsup(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    std::string beta;
    PsiTargets pt;
    std::uint64_t qmax = 1000;
    std::uint64_t y = 1;
    std::uint64_t z = 0;
    bool brute = false;
    std::vector<std::uint64_t> tail;
    std::string u = "full";
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "limsup", "moving-target hits (a, q) for one beta", true);
  cmd.app->add_option("--beta", o->beta, "beta")->required();
  add_psi_targets(cmd.app, o->pt);
  cmd.app->add_option("--qmax", o->qmax, "largest q");
  cmd.app->add_option("--y", o->y, "residue modulus");
  cmd.app->add_option("--z", o->z, "residue class");
  cmd.app->add_flag("--brute", o->brute, "use the 50-digit reference scan");
  cmd.app->add_option("--tail", o->tail, "Q0,Q1: also report m(U ∩ union of E_q)")
      ->delimiter(',')
      ->expected(2);
  cmd.app->add_option("--u", o->u, "open set U for --tail: full | center,radius");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    const auto [psi, targets] = resolve(o->pt);
    const Residue res = residue_of(o->y, o->z);
    const BetaSpec spec = BetaSpec::parse(o->beta, c.seed);
    const TorusPoint beta = spec.resolve();
    const auto hits = o->brute ? hits_brute(beta, psi, targets, o->qmax, res)
                               : hits_fast(beta, psi, targets, o->qmax, res, {c.threads, c.precision});
    Artifact csv(c.out, out, "#", *self.app);
    write_hits_csv(csv.stream(), hits);
    if (!c.summary.empty()) {
      Artifact js(c.summary, out, "//", *self.app);
      Json j{{"command", "limsup"},
             {"beta", spec.describe()},
             {"beta_value", num(beta.value())},
             {"psi", psi.describe()},
             {"targets", targets.describe()},
             {"q_max", o->qmax},
             {"residue", residue_json(res)},
             {"hit_count", hits.size()}};
      j["last_hit_q"] = hits.empty() ? Json(nullptr) : Json(hits.back().q);
      if (!o->tail.empty()) {
        const IntervalUnion u = parse_u(o->u);
        j["tail"] = {{"q0", o->tail[0]},
                     {"q1", o->tail[1]},
                     {"u", o->u},
                     {"measure", num(tail_union_measure(o->tail[0], o->tail[1], psi, targets, u, res))},
                     {"measure_u", num(u.measure())}};
      }
      write_json(js, j);
    }
  };
}

void add_eq_size(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    PsiTargets pt;
    std::uint64_t qmin = 1;
    std::uint64_t qmax = 100;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "eq-size", "disjointness and measure of E_q", false);
  add_psi_targets(cmd.app, o->pt);
  cmd.app->add_option("--qmin", o->qmin, "first q");
  cmd.app->add_option("--qmax", o->qmax, "last q");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    require(o->qmin >= 1 && o->qmin <= o->qmax, "eq-size: requires 1 <= qmin <= qmax");
    const auto [psi, targets] = resolve(o->pt);
    Artifact csv(c.out, out, "#", *self.app);
    auto& s = csv.stream();
    s << "q,precondition,precondition_holds,disjoint,measure,two_psi,matches_2psi\n";
    for (std::uint64_t q = o->qmin; q <= o->qmax; ++q) {
      const SizeReport r = check_size(q, psi, targets);
      s << q << ',' << num(r.precondition) << ',' << (r.precondition_holds ? "true" : "false") << ','
        << (r.disjoint ? "true" : "false") << ',' << num(r.measure) << ',' << num(2 * psi(q)) << ','
        << (r.matches_2psi ? "true" : "false") << '\n';
    }
  };
}

void add_overlap(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    PsiTargets pt;
    std::uint64_t rmin = 1;
    std::uint64_t qmax = 100;
    bool all = false;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "overlap", "pairwise overlap m(E_q ∩ E_r) against its bound", true);
  add_psi_targets(cmd.app, o->pt);
  cmd.app->add_option("--rmin", o->rmin, "smallest r");
  cmd.app->add_option("--qmax", o->qmax, "largest q");
  cmd.app->add_flag("--all", o->all, "include pairs failing the disjointness precondition");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    const auto [psi, targets] = resolve(o->pt);
    const OverlapSweep sw = overlap_sweep(o->rmin, o->qmax, psi, targets, !o->all, c.threads);
    Artifact csv(c.out, out, "#", *self.app);
    write_overlap_csv(csv.stream(), sw.rows);
    if (!c.summary.empty()) {
      Artifact js(c.summary, out, "//", *self.app);
      write_json(js, {{"command", "overlap"},
                      {"psi", psi.describe()},
                      {"targets", targets.describe()},
                      {"pairs", sw.rows.size()},
                      {"violations", sw.violations},
                      {"skipped", sw.skipped},
                      {"q_star", sw.q_star}});
    }
  };
}

void add_density(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    PsiTargets pt;
    std::string u;
    std::uint64_t qmin = 1;
    std::uint64_t qmax = 100;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "density", "m(E_q ∩ U) / (m(E_q) m(U)) over a q range", true);
  add_psi_targets(cmd.app, o->pt);
  cmd.app->add_option("--u", o->u, "open set U: full | center,radius")->required();
  cmd.app->add_option("--qmin", o->qmin, "first q");
  cmd.app->add_option("--qmax", o->qmax, "last q");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    const auto [psi, targets] = resolve(o->pt);
    const DensitySweep sw = density_sweep(parse_u(o->u), o->qmin, o->qmax, psi, targets, c.threads);
    Artifact csv(c.out, out, "#", *self.app);
    csv.stream() << "q,ratio,passes_half\n";
    for (const auto& r : sw.rows) {
      csv.stream() << r.q << ',' << num(r.ratio) << ',' << (r.passes_half ? "true" : "false") << '\n';
    }
    if (!c.summary.empty()) {
      Artifact js(c.summary, out, "//", *self.app);
      Json j{{"command", "density"}, {"u", o->u}, {"rows", sw.rows.size()}};
      j["q0"] = sw.q0 ? Json(*sw.q0) : Json(nullptr);
      write_json(js, j);
    }
  };
}

void add_divisor_series(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    std::vector<long double> grid{1e3L, 1e4L, 1e5L};
    int k = 3;
    long double eps = 1.0L;
    std::string psi = "power:1,1";
    std::uint64_t y = 1;
    std::uint64_t z = 0;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "divisor-series", "weighted divisor sums G(x), H(x)", false);
  cmd.app->add_option("--grid", o->grid, "increasing x values, comma separated")->delimiter(',');
  cmd.app->add_option("--k", o->k, "iterated-log depth, 2..5");
  cmd.app->add_option("--eps", o->eps, "weight exponent epsilon > 0");
  cmd.app->add_option("--psi", o->psi, "approximation function for the psi-weighted sums");
  cmd.app->add_option("--y", o->y, "residue modulus");
  cmd.app->add_option("--z", o->z, "residue class");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    const auto rows = divisor_series(o->grid, IterLogWeight::make(o->k, o->eps),
                                     ApproxFunction::parse(o->psi), o->y, o->z);
    Artifact csv(c.out, out, "#", *self.app);
    write_series_csv(csv.stream(), rows);
  };
}

Json chain_json(const ChainReport& rep) {
  Json steps = Json::array();
  for (const auto& s : rep.steps) {
    steps.push_back({{"name", s.name},
                     {"lhs", num(s.lhs)},
                     {"rhs", num(s.rhs)},
                     {"pass", s.pass},
                     {"margin", num(s.margin)}});
  }
  Json j{{"m", rep.m}, {"steps", std::move(steps)}};
  j["first_failure"] = rep.first_failure ? Json(rep.steps[*rep.first_failure].name) : Json(nullptr);
  j["final_pass"] = rep.final_pass;
  return j;
}

void add_chain(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    int n = 3;
    long double rho = 2.0L;
    long double c = 0.1L;
    std::uint64_t j = 0;
    std::uint64_t k = 0;
    std::uint64_t jmin = 10;
    std::uint64_t jmax = 0;
    int per_decade = 4;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "chain", "replay the reduction to the two-sine bound", false);
  cmd.app->add_option("--n", o->n, "dimension parameter n >= 2");
  cmd.app->add_option("--rho", o->rho, "real order rho");
  cmd.app->add_option("--c", o->c, "constant c > 0");
  cmd.app->add_option("--j", o->j, "single witness j");
  cmd.app->add_option("--k", o->k, "single witness k in [0, 2j + n - 1)");
  cmd.app->add_option("--jmin", o->jmin, "sweep: first j");
  cmd.app->add_option("--jmax", o->jmax, "sweep: last j (sweep mode when --j is absent)");
  cmd.app->add_option("--per-decade", o->per_decade, "sweep: grid points per decade");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    Artifact js(c.out, out, "//", *self.app);
    Json j{{"command", "chain"}, {"n", o->n}, {"rho", num(o->rho)}, {"c", num(o->c)}};
    if (o->j != 0) {
      const ExactSolution s = construct_exact_solution(o->n, o->rho, o->j, o->k);
      const RubinParams p = make_params(o->n, o->rho, s.beta);
      j["j"] = o->j;
      j["k_requested"] = s.k_requested;
      j["k"] = s.witness.k;
      j["beta"] = num(s.beta.value());
      j["beta_raw"] = to_string(s.beta.raw());
      j.update(chain_json(verify_chain(p, o->c, s.witness)));
    } else {
      require(o->jmax >= o->jmin, "chain: give --j, or a sweep with --jmax >= --jmin");
      const auto grid = geometric_grid(o->jmin, o->jmax, o->per_decade);
      const ThresholdSweep sw = chain_threshold(o->n, o->rho, o->c, grid, c.seed, c.threads);
      j["seed"] = c.seed;
      j["j_grid"] = sw.j_grid;
      Json passed = Json::array();
      for (bool b : sw.passed) passed.push_back(b);
      j["passed"] = std::move(passed);
      j["threshold"] = sw.threshold ? Json(*sw.threshold) : Json(nullptr);
    }
    write_json(js, j);
  };
}

void add_reduce49(std::vector<Command>& cmds, CLI::App& app) {
  struct Opts {
    std::string beta;
    long double c = 0.5L;
    std::uint64_t qmax = 1000;
  };
  auto o = std::make_shared<Opts>();
  Command& cmd = add_command(cmds, app, "reduce49",
                             "compare ‖(q − ½)β + ½‖ < c/q with its odd-denominator form", false);
  cmd.app->add_option("--beta", o->beta, "beta")->required();
  cmd.app->add_option("--c", o->c, "constant c > 0");
  cmd.app->add_option("--qmax", o->qmax, "largest q");
  cmd.body = [o](const Command& self, std::ostream& out) {
    const Common& c = *self.common;
    const BetaSpec spec = BetaSpec::parse(o->beta, c.seed);
    const ReductionCheck rc = reduce_49(spec.resolve(), o->c, o->qmax);
    Artifact js(c.out, out, "//", *self.app);
    write_json(js, {{"command", "reduce49"},
                    {"beta", spec.describe()},
                    {"c", num(o->c)},
                    {"q_max", o->qmax},
                    {"beta_half", num(rc.beta_half.value())},
                    {"direct", rc.direct},
                    {"reduced_exact", rc.reduced_exact},
                    {"reduced_low", rc.reduced_low},
                    {"reduced_high", rc.reduced_high},
                    {"unmatched", rc.unmatched},
                    {"boundary", rc.boundary},
                    {"bijection_ok", rc.bijection_ok},
                    {"bracket_ok", rc.bracket_ok}});
  };
}

std::string strip_brackets(std::string s) {
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::string out;
  for (char ch : s) {
    if (ch != ' ') out += ch;
  }
  return out;
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  app.option_defaults()->always_capture_default();
  std::vector<Command> cmds;
  cmds.reserve(9);
  add_scan_f(cmds, app);
  add_critical(cmds, app);
  add_limsup(cmds, app);
  add_eq_size(cmds, app);
  add_overlap(cmds, app);
  add_density(cmds, app);
  add_divisor_series(cmds, app);
  add_chain(cmds, app);
  add_reduce49(cmds, app);
  return cmds;
}

std::string resolved_config(const CLI::App& sub) {
  std::string line = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->get_expected_min() == 0) {
      value = opt->count() > 0 && opt->as<bool>() ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = strip_brackets(opt->get_default_str());
    }
    line += ' ' + name + '=' + value;
  }
  return line;
}

Artifact::Artifact(const std::string& path, std::ostream& fallback, std::string_view comment,
                   const CLI::App& sub)
    : out_(&fallback) {
  if (!path.empty() && path != "-") {
    file_.open(path, std::ios::binary | std::ios::trunc);
    require(file_.good(), "cannot write '" + path + "'");
    out_ = &file_;
  }
  *out_ << comment << " sdlab " << resolved_config(sub) << '\n';
}

}  // namespace sdlab::cli
