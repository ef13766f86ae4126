#include "sdlab/beta.hpp"

#include <cctype>
#include <charconv>

#include "sdlab/error.hpp"
#include "sdlab/rng.hpp"

namespace sdlab {

namespace {

BigInt pow2(unsigned bits) { return BigInt(1) << bits; }

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw ValidationError(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

}  // namespace

BigRational to_rational(TorusPoint x) {
  BigInt num = static_cast<std::uint64_t>(x.raw() >> 64);
  num <<= 64;
  num += static_cast<std::uint64_t>(x.raw());
  return BigRational(num, pow2(128));
}

BetaSpec BetaSpec::rational(const BigInt& num, const BigInt& den) {
  require(den != 0, "beta: zero denominator");
  BigRational v(num, den);
  require(v > 0 && v < 1, "beta must lie in (0,1)");
  BetaSpec s;
  s.kind_ = BetaKind::Rational;
  s.value_ = v;
  s.text_ = numerator(v).str() + "/" + denominator(v).str();
  return s;
}

BetaSpec BetaSpec::decimal(std::string_view text) {
  text = trim(text);
  require(!text.empty(), "beta: empty decimal");
  const auto dot = text.find('.');
  const std::string_view int_part = text.substr(0, dot);
  const std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  for (char c : int_part) require(std::isdigit(static_cast<unsigned char>(c)), "beta: bad decimal");
  for (char c : frac_part) require(std::isdigit(static_cast<unsigned char>(c)), "beta: bad decimal");
  BigInt num = 0;
  for (char c : int_part) num = num * 10 + (c - '0');
  BigInt den = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  BetaSpec s = rational(num, den);
  s.text_ = std::string(text);
  return s;
}

BetaSpec BetaSpec::golden() {
  BetaSpec s;
  s.kind_ = BetaKind::Golden;
  s.text_ = "golden";
  return s;
}

BetaSpec BetaSpec::sqrt_frac(std::uint64_t d) {
  require(d > 0, "sqrt: D must be positive");
  const BigInt r = boost::multiprecision::sqrt(BigInt(d));
  require(r * r != d, "sqrt: D must not be a perfect square");
  BetaSpec s;
  s.kind_ = BetaKind::SqrtFrac;
  s.radicand_ = d;
  s.text_ = "sqrt:" + std::to_string(d);
  return s;
}

BetaSpec BetaSpec::cf_periodic(std::vector<std::uint64_t> quotients) {
  require(!quotients.empty(), "cf: empty period");
  for (auto a : quotients) require(a > 0, "cf: partial quotients must be positive");
  BetaSpec s;
  s.kind_ = BetaKind::CfPeriodic;
  s.text_ = "cf:[";
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    if (i) s.text_ += ",";
    s.text_ += std::to_string(quotients[i]);
  }
  s.text_ += "]";
  s.period_ = std::move(quotients);
  return s;
}

BetaSpec BetaSpec::random(std::uint64_t seed) {
  SplitMix64 rng(seed);
  BetaSpec s;
  s.kind_ = BetaKind::Random;
  s.value_ = to_rational(rng.torus_point());
  s.text_ = "rand:" + std::to_string(seed);
  return s;
}

BetaSpec BetaSpec::parse(std::string_view text, std::uint64_t seed) {
  text = trim(text);
  if (text == "golden") return golden();
  if (text == "rand") return random(seed);
  if (text.starts_with("rand:")) return random(parse_u64(text.substr(5), "seed"));
  if (text.starts_with("sqrt:")) return sqrt_frac(parse_u64(text.substr(5), "radicand"));
  if (text.starts_with("cf:")) {
    std::string_view body = trim(text.substr(3));
    require(body.size() >= 2 && body.front() == '[' && body.back() == ']',
            "cf: expected cf:[a1,a2,...]");
    body = body.substr(1, body.size() - 2);
    std::vector<std::uint64_t> qs;
    while (!body.empty()) {
      const auto comma = body.find(',');
      qs.push_back(parse_u64(trim(body.substr(0, comma)), "partial quotient"));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    return cf_periodic(std::move(qs));
  }
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto p = parse_u64(trim(text.substr(0, slash)), "numerator");
    const auto q = parse_u64(trim(text.substr(slash + 1)), "denominator");
    return rational(BigInt(p), BigInt(q));
  }
  return decimal(text);
}

std::optional<BigRational> BetaSpec::exact() const {
  if (kind_ == BetaKind::Rational || kind_ == BetaKind::Random) return value_;
  return std::nullopt;
}

BigInt BetaSpec::scaled_floor(unsigned bits) const {
  switch (kind_) {
    case BetaKind::Rational:
    case BetaKind::Random:
      return floor_div(numerator(value_) << bits, denominator(value_));
    case BetaKind::Golden: {
      // floor((sqrt(5·4^b) − 2^b) / 2), using floor(sqrt) inside is exact.
      const BigInt r = boost::multiprecision::sqrt(BigInt(5) << (2 * bits));
      return (r - pow2(bits)) >> 1;
    }
    case BetaKind::SqrtFrac: {
      const BigInt r = boost::multiprecision::sqrt(BigInt(radicand_) << (2 * bits));
      const BigInt whole = boost::multiprecision::sqrt(BigInt(radicand_));
      return r - (whole << bits);
    }
    case BetaKind::CfPeriodic: {
      // Consecutive convergents bracket β; stop once both floors agree.
      BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
      BigInt last_floor = -1;
      for (std::size_t k = 0;; ++k) {
        const BigInt a = period_[k % period_.size()];
        BigInt p_next = a * p + p_prev;
        BigInt q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        const BigInt f = (p << bits) / q;
        if (k > 0 && f == last_floor && q_prev * q > pow2(bits + 2)) return f;
        last_floor = f;
      }
    }
  }
  return 0;
}

TorusPoint BetaSpec::resolve() const {
  const BigInt f = scaled_floor(128);
  const BigInt mask = (BigInt(1) << 64) - 1;
  const auto hi = static_cast<std::uint64_t>(f >> 64);
  const auto lo = static_cast<std::uint64_t>(f & mask);
  return TorusPoint::from_raw((static_cast<u128>(hi) << 64) | lo);
}

std::string BetaSpec::describe() const { return text_; }

}  // namespace sdlab
