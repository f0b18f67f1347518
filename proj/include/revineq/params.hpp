#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace revineq {

/// p' = p / (p - 1). Negative for p in (0, 1).
double conjugate_exponent(double p);

enum class Variant { full, improved_a, improved_b };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Exponents of the Stein-Weiss family. p' and q are always derived from p
/// and q'; gamma is derived as alpha + beta + 1 unless set explicitly.
struct InequalityParams {
  double Q = 1.0;
  double lambda = 0.0;
  double p = 0.5;
  double q_prime = 0.5;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> gamma_override;
  Variant variant = Variant::full;

  double p_conj() const { return conjugate_exponent(p); }
  double q() const { return conjugate_exponent(q_prime); }
  double gamma() const { return gamma_override.value_or(alpha + beta + 1.0); }
};

struct Condition {
  std::string name;
  bool holds = false;
  /// Required for the requested variant. Conditions that fail but are not
  /// required are reported as unverified hypotheses.
  bool required = true;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<Condition> conditions;

  bool admissible() const;
  /// "<name> failed" for each failing required condition.
  std::vector<std::string> failures() const;
  std::vector<std::string> unverified() const;
  /// First failure reason, empty when admissible.
  std::string reason() const;
};

/// Checks the hypotheses of the reverse Stein-Weiss inequality for the
/// requested variant, plus the derived facts used by the constants:
/// Q + (alpha+lambda) q < 0, Q - beta p (1-p') > 0 (A1 finite) and
/// Q + alpha q > 0, Q + (beta+lambda) p' < 0 (A2 finite).
AdmissibilityReport validate_params(const InequalityParams& params);

/// Tolerance of the balance condition 1/q' + 1/p = (alpha+beta+lambda)/Q + 2.
inline constexpr double kBalanceTol = 1e-12;

/// lambda solving the balance condition for the other parameters.
double balance_lambda(double Q, double p, double q_prime, double alpha, double beta);

double analytic_A1(const InequalityParams& params, double sphere);
double analytic_A2(const InequalityParams& params, double sphere);

struct ConstantBracket {
  double A = 0.0;
  double kappa = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// kappa = (p'/(p'+q))^{-1/q} (q/(p'+q))^{-1/p'}.
double bracket_kappa(double p_conj, double q);
ConstantBracket constant_bracket(double A, double p_conj, double q);

/// Certified lower constant L with B(f,h) >= L ||f||_{q'} ||h||_p:
/// full 2^{-lambda-1} kappa (A1 + A2), improved_a 2^{-lambda} kappa A2,
/// improved_b 2^{-lambda} kappa A1.
double stein_weiss_lower_constant(const InequalityParams& params, double sphere);

/// Exponent e with A1, A2, L proportional to |S|^e (e = 1/q + 1/p').
double sphere_exponent(const InequalityParams& params);

}  // namespace revineq
