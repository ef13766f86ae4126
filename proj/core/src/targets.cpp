#include "sdlab/targets.hpp"

#include <cmath>
#include <numbers>

#include "sdlab/error.hpp"
#include "sdlab/format.hpp"

namespace sdlab {

namespace {

std::vector<long double> parse_reals(std::string_view s, char sep) {
  std::vector<long double> out;
  while (!s.empty()) {
    const auto pos = s.find(sep);
    const std::string item(s.substr(0, pos));
    std::size_t used = 0;
    long double v = 0;
    try {
      v = std::stold(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("invalid number '" + item + "'");
    }
    require(used == item.size(), "invalid number '" + item + "'");
    out.push_back(v);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::string join(const std::vector<long double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += decimal18(v[i]);
  }
  return s;
}

std::uint64_t mod_q(std::int64_t a, std::uint64_t q) {
  const auto sq = static_cast<std::int64_t>(q);
  std::int64_t r = a % sq;
  if (r < 0) r += sq;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

ApproxFunction ApproxFunction::power(long double c, long double mu) {
  require(std::isfinite(c) && c > 0, "psi: c must be positive");
  require(std::isfinite(mu) && mu >= 1, "psi: mu must be >= 1");
  ApproxFunction f;
  f.family_ = Family::Power;
  f.c_ = c;
  f.exponent_ = mu;
  return f;
}

ApproxFunction ApproxFunction::log_damped(long double c, long double sigma) {
  require(std::isfinite(c) && c > 0, "psi: c must be positive");
  require(std::isfinite(sigma) && sigma >= 0, "psi: sigma must be >= 0");
  ApproxFunction f;
  f.family_ = Family::LogDamped;
  f.c_ = c;
  f.exponent_ = sigma;
  return f;
}

ApproxFunction ApproxFunction::table(std::vector<long double> values) {
  require(!values.empty(), "psi table: empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]) && values[i] > 0, "psi table: values must be positive");
    if (i > 0) require(values[i] <= values[i - 1], "psi table: values must be nonincreasing");
  }
  ApproxFunction f;
  f.family_ = Family::Table;
  f.values_ = std::move(values);
  return f;
}

ApproxFunction ApproxFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, "psi: expected family:params");
  const auto name = text.substr(0, colon);
  const auto args = parse_reals(text.substr(colon + 1), ',');
  if (name == "power") {
    require(args.size() == 2, "psi power: expected power:c,mu");
    return power(args[0], args[1]);
  }
  if (name == "log") {
    require(args.size() == 2, "psi log: expected log:c,sigma");
    return log_damped(args[0], args[1]);
  }
  if (name == "table") return table(args);
  throw ValidationError("psi: unknown family '" + std::string(name) + "'");
}

long double ApproxFunction::operator()(std::uint64_t q) const {
  const auto x = static_cast<long double>(q);
  switch (family_) {
    case Family::Power:
      return exponent_ == 1.0L ? c_ / x : c_ / std::pow(x, exponent_);
    case Family::LogDamped:
      return c_ / (x * std::pow(1.0L + std::log(x), exponent_));
    case Family::Table:
      return values_[std::min<std::uint64_t>(q, values_.size()) - 1];
  }
  return 0.0L;
}

std::string ApproxFunction::describe() const {
  switch (family_) {
    case Family::Power:
      return "power:" + decimal18(c_) + "," + decimal18(exponent_);
    case Family::LogDamped:
      return "log:" + decimal18(c_) + "," + decimal18(exponent_);
    case Family::Table:
      return "table:" + join(values_, ',');
  }
  return {};
}

TargetFamily TargetFamily::constant(long double x) {
  require(std::isfinite(x), "target: x must be finite");
  TargetFamily t;
  t.kind_ = Kind::Constant;
  t.x_ = x;
  return t;
}

TargetFamily TargetFamily::cosine(long double x, long double b, long double c) {
  require(std::isfinite(x) && std::isfinite(b), "target: x and B must be finite");
  require(std::isfinite(c) && c > 0, "target: c must be positive");
  TargetFamily t;
  t.kind_ = Kind::Cosine;
  t.x_ = x;
  t.b_ = b;
  t.c0_ = std::fabs(b) / c;
  return t;
}

TargetFamily TargetFamily::table(std::vector<long double> gammas, std::vector<long double> profile,
                                 long double c0, ApproxFunction psi) {
  require(!gammas.empty(), "target table: empty gamma list");
  require(!profile.empty(), "target table: empty profile");
  require(std::isfinite(c0) && c0 >= 0, "target table: C0 must be nonnegative");
  for (auto g : gammas) require(std::isfinite(g), "target table: gamma must be finite");
  for (auto p : profile) require(std::isfinite(p) && std::fabs(p) <= 1, "target table: profile entries must lie in [-1, 1]");
  TargetFamily t;
  t.kind_ = Kind::Table;
  t.gammas_ = std::move(gammas);
  t.profile_ = std::move(profile);
  t.c0_ = c0;
  t.psi_.push_back(std::move(psi));
  return t;
}

TargetFamily TargetFamily::parse(std::string_view text, const ApproxFunction& psi) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, "target: expected kind:params");
  const auto name = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  if (name == "constant") {
    const auto args = parse_reals(body, ',');
    require(args.size() == 1, "target constant: expected constant:x");
    return constant(args[0]);
  }
  if (name == "cosine") {
    const auto args = parse_reals(body, ',');
    require(args.size() == 2, "target cosine: expected cosine:x,B");
    require(psi.family() == ApproxFunction::Family::Power && psi.exponent() == 1.0L,
            "target cosine: needs psi = power:c,1 for its C0 certificate");
    return cosine(args[0], args[1], psi.c());
  }
  if (name == "table") {
    const auto first = body.find('/');
    const auto second = body.rfind('/');
    require(first != std::string_view::npos && second != first,
            "target table: expected table:g1;g2/p1;p2/C0");
    const auto c0 = parse_reals(body.substr(second + 1), ',');
    require(c0.size() == 1, "target table: expected a single C0");
    return table(parse_reals(body.substr(0, first), ';'),
                 parse_reals(body.substr(first + 1, second - first - 1), ';'), c0[0], psi);
  }
  throw ValidationError("target: unknown kind '" + std::string(name) + "'");
}

long double TargetFamily::gamma(std::uint64_t q) const {
  if (kind_ == Kind::Table) return gammas_[(q - 1) % gammas_.size()];
  return x_;
}

long double TargetFamily::epsilon(std::int64_t a, std::uint64_t q) const {
  switch (kind_) {
    case Kind::Constant:
      return 0.0L;
    case Kind::Cosine: {
      if (b_ == 0) return 0.0L;
      // cos(4πa/q) = cos(2π·((2a) mod q)/q); reducing first keeps the argument small.
      const std::uint64_t r = (2 * mod_q(a, q)) % q;
      const long double angle = 2.0L * std::numbers::pi_v<long double> *
                                static_cast<long double>(r) / static_cast<long double>(q);
      return -(b_ / static_cast<long double>(q)) * std::cos(angle);
    }
    case Kind::Table:
      return c0_ * psi_.front()(q) * profile_[mod_q(a, q) % profile_.size()];
  }
  return 0.0L;
}

void TargetFamily::validate(const ApproxFunction& psi, std::uint64_t q) const {
  require(q >= 1, "target: q must be >= 1");
  const long double bound = c0_ * psi(q);
  const long double slack = 1e-12L * (bound + 1e-300L);
  for (std::uint64_t a = 0; a < q; ++a) {
    const long double e = epsilon(static_cast<std::int64_t>(a), q);
    if (std::fabs(e) > bound + slack) {
      throw ValidationError("target: |eps(" + std::to_string(a) + "," + std::to_string(q) +
                            ")| exceeds C0*psi(q)");
    }
  }
  for (std::int64_t a : {std::int64_t{0}, std::int64_t{1}, static_cast<std::int64_t>(q / 2)}) {
    const auto sq = static_cast<std::int64_t>(q);
    if (epsilon(a, q) != epsilon(a + sq, q) || epsilon(a, q) != epsilon(a - 3 * sq, q)) {
      throw ValidationError("target: eps is not q-periodic in a");
    }
  }
}

std::string TargetFamily::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant:" + decimal18(x_);
    case Kind::Cosine:
      return "cosine:" + decimal18(x_) + "," + decimal18(b_);
    case Kind::Table:
      return "table:" + join(gammas_, ';') + "/" + join(profile_, ';') + "/" + decimal18(c0_);
  }
  return {};
}

void Residue::validate() const {
  require(modulus >= 1, "residue: modulus must be >= 1");
  require(rem < modulus, "residue: remainder must lie in [0, modulus)");
}

}  // namespace sdlab
