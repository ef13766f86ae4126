#pragma once

// Approximation functions ψ and two-parameter moving targets
// γ_{a,q} = γ_q + ε_{a,q}. Both are closed-form registries rather than
// callbacks so that monotonicity, q-periodicity in a and the C0 certificate
// can be checked instead of trusted.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdlab {

class ApproxFunction {
 public:
  enum class Family { Power, LogDamped, Table };

  /// ψ(q) = c / q^mu, mu >= 1.
  static ApproxFunction power(long double c, long double mu);
  /// ψ(q) = c / (q · (1 + log q)^sigma), sigma >= 0.
  static ApproxFunction log_damped(long double c, long double sigma);
  /// ψ(q) = values[q−1], extended by the last value; must be positive and nonincreasing.
  static ApproxFunction table(std::vector<long double> values);
  /// `power:c,mu`, `log:c,sigma` or `table:v1,v2,...`.
  static ApproxFunction parse(std::string_view text);

  long double operator()(std::uint64_t q) const;

  Family family() const { return family_; }
  long double c() const { return c_; }
  long double exponent() const { return exponent_; }
  const std::vector<long double>& values() const { return values_; }
  std::string describe() const;

 private:
  Family family_ = Family::Power;
  long double c_ = 1.0L;
  long double exponent_ = 1.0L;
  std::vector<long double> values_;
};

class TargetFamily {
 public:
  enum class Kind { Constant, Cosine, Table };

  /// γ_q = x, ε ≡ 0.
  static TargetFamily constant(long double x);
  /// γ_q = x, ε_{a,q} = −(B/q)·cos(4πa/q). Paired with ψ(q) = c/q the
  /// certificate is C0 = |B|/c.
  static TargetFamily cosine(long double x, long double b, long double c);
  /// γ_q = gammas[(q−1) mod len]; ε_{a,q} = C0·ψ(q)·profile[(a mod q) mod len]
  /// with every profile entry in [−1, 1].
  static TargetFamily table(std::vector<long double> gammas, std::vector<long double> profile,
                            long double c0, ApproxFunction psi);
  /// `constant:x`, `cosine:x,B` (c taken from ψ = c/q), `table:g1;g2/p1;p2/C0`.
  static TargetFamily parse(std::string_view text, const ApproxFunction& psi);

  long double gamma(std::uint64_t q) const;
  /// ε_{a,q}; depends only on a mod q.
  long double epsilon(std::int64_t a, std::uint64_t q) const;
  long double target(std::int64_t a, std::uint64_t q) const { return gamma(q) + epsilon(a, q); }
  long double c0() const { return c0_; }
  Kind kind() const { return kind_; }
  bool has_perturbation() const { return kind_ != Kind::Constant && c0_ > 0; }

  /// Checks |ε_{a,q}| ≤ C0·ψ(q) for every a in [0, q) and periodicity on a
  /// few shifted a. Throws ValidationError on failure.
  void validate(const ApproxFunction& psi, std::uint64_t q) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  long double x_ = 0.0L;
  long double b_ = 0.0L;
  long double c0_ = 0.0L;
  std::vector<long double> gammas_;
  std::vector<long double> profile_;
  std::vector<ApproxFunction> psi_;  // Table only (0 or 1 element)
};

/// Residue class q ≡ rem (mod modulus).
struct Residue {
  std::uint64_t modulus = 1;
  std::uint64_t rem = 0;

  bool contains(std::uint64_t q) const { return q % modulus == rem; }
  void validate() const;
};

}  // namespace sdlab
