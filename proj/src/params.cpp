#include "revineq/params.hpp"

#include <cmath>
#include <sstream>

#include "revineq/errors.hpp"

namespace revineq {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double balance_residual(const InequalityParams& pr) {
  return 1.0 / pr.q_prime + 1.0 / pr.p - ((pr.alpha + pr.beta + pr.lambda) / pr.Q + 2.0);
}

void require_balance(const InequalityParams& pr, const char* origin) {
  const double res = balance_residual(pr);
  if (!(std::abs(res) <= kBalanceTol))
    throw ParameterError(origin, "balance condition failed (residual " + fmt(res) +
                                     "); the infimum over |x| of a nonconstant power is 0");
}

void require_exponents(const InequalityParams& pr, const char* origin) {
  if (!(pr.Q > 0.0)) throw ParameterError(origin, "Q must be positive");
  if (!(pr.p > 0.0 && pr.p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  if (!(pr.q_prime > 0.0 && pr.q_prime < 1.0))
    throw ParameterError(origin, "q' must lie in (0, 1)");
}

}  // namespace

double conjugate_exponent(double p) {
  if (p == 1.0 || !std::isfinite(p))
    throw ParameterError("inequalities::conjugate_exponent", "p must be finite and != 1");
  return p / (p - 1.0);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::improved_a: return "improved_a";
    case Variant::improved_b: return "improved_b";
  }
  return "full";
}

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "improved_a") return Variant::improved_a;
  if (name == "improved_b") return Variant::improved_b;
  throw ParameterError("inequalities::parse_variant", "unknown variant '" + name + "'");
}

bool AdmissibilityReport::admissible() const {
  for (const auto& c : conditions)
    if (c.required && !c.holds) return false;
  return true;
}

std::vector<std::string> AdmissibilityReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (c.required && !c.holds) out.push_back(c.name + " failed");
  return out;
}

std::vector<std::string> AdmissibilityReport::unverified() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (!c.required && !c.holds) out.push_back("unverified hypothesis: " + c.name);
  return out;
}

std::string AdmissibilityReport::reason() const {
  const auto f = failures();
  return f.empty() ? std::string() : f.front();
}

AdmissibilityReport validate_params(const InequalityParams& pr) {
  AdmissibilityReport rep;
  auto add = [&](std::string name, bool holds, bool required, std::string detail) {
    rep.conditions.push_back({std::move(name), holds, required, std::move(detail)});
  };
  const bool exps_ok = pr.p > 0.0 && pr.p < 1.0 && pr.q_prime > 0.0 && pr.q_prime < 1.0;
  add("Q > 0", pr.Q > 0.0, true, "Q = " + fmt(pr.Q));
  add("lambda > 0", pr.lambda > 0.0, true, "lambda = " + fmt(pr.lambda));
  add("p in (0,1)", pr.p > 0.0 && pr.p < 1.0, true, "p = " + fmt(pr.p));
  add("q' in (0,1)", pr.q_prime > 0.0 && pr.q_prime < 1.0, true, "q' = " + fmt(pr.q_prime));
  if (!exps_ok || !(pr.Q > 0.0)) return rep;

  const double q = pr.q(), pc = pr.p_conj(), Q = pr.Q;
  const bool a_branch = pr.variant != Variant::improved_b;
  const bool b_branch = pr.variant != Variant::improved_a;
  add("0 <= alpha", pr.alpha >= 0.0, a_branch, "alpha = " + fmt(pr.alpha));
  add("alpha < -Q/q", pr.alpha < -Q / q, a_branch, "-Q/q = " + fmt(-Q / q));
  add("0 <= beta", pr.beta >= 0.0, b_branch, "beta = " + fmt(pr.beta));
  add("beta < -Q/p'", pr.beta < -Q / pc, b_branch, "-Q/p' = " + fmt(-Q / pc));
  const double res = balance_residual(pr);
  add("balance condition", std::abs(res) <= kBalanceTol, true,
      "1/q' + 1/p - (alpha+beta+lambda)/Q - 2 = " + fmt(res));
  // Derived facts used by the proof; each pair is what makes A1 (resp. A2)
  // finite and positive.
  const double d1 = Q + (pr.alpha + pr.lambda) * q;
  const double d2 = Q - pr.beta * pr.p * (1.0 - pc);
  const double d3 = Q + pr.alpha * q;
  const double d4 = Q + (pr.beta + pr.lambda) * pc;
  add("Q + (alpha+lambda) q < 0", d1 < 0.0, b_branch, "value " + fmt(d1));
  add("Q - beta p (1-p') > 0", d2 > 0.0, b_branch, "value " + fmt(d2));
  add("Q + alpha q > 0", d3 > 0.0, a_branch, "value " + fmt(d3));
  add("Q + (beta+lambda) p' < 0", d4 < 0.0, a_branch, "value " + fmt(d4));
  return rep;
}

double balance_lambda(double Q, double p, double q_prime, double alpha, double beta) {
  return Q * (1.0 / q_prime + 1.0 / p - 2.0) - alpha - beta;
}

double analytic_A1(const InequalityParams& pr, double sphere) {
  const char* origin = "inequalities::analytic_A1";
  require_exponents(pr, origin);
  if (!(sphere > 0.0)) throw ParameterError(origin, "sphere measure must be positive");
  const double q = pr.q(), pc = pr.p_conj(), Q = pr.Q;
  const double d1 = Q + (pr.alpha + pr.lambda) * q;
  const double d2 = Q - pr.beta * pr.p * (1.0 - pc);
  if (!(d1 < 0.0)) throw ParameterError(origin, "Q + (alpha+lambda) q < 0 violated: " + fmt(d1));
  if (!(d2 > 0.0)) throw ParameterError(origin, "Q - beta p (1-p') > 0 violated: " + fmt(d2));
  require_balance(pr, origin);
  return std::pow(sphere / std::abs(d1), 1.0 / q) * std::pow(sphere / d2, 1.0 / pc);
}

double analytic_A2(const InequalityParams& pr, double sphere) {
  const char* origin = "inequalities::analytic_A2";
  require_exponents(pr, origin);
  if (!(sphere > 0.0)) throw ParameterError(origin, "sphere measure must be positive");
  const double q = pr.q(), pc = pr.p_conj(), Q = pr.Q;
  const double d3 = Q + pr.alpha * q;
  const double d4 = Q + (pr.beta + pr.lambda) * pc;
  if (!(d3 > 0.0)) throw ParameterError(origin, "Q + alpha q > 0 violated: " + fmt(d3));
  if (!(d4 < 0.0)) throw ParameterError(origin, "Q + (beta+lambda) p' < 0 violated: " + fmt(d4));
  require_balance(pr, origin);
  return std::pow(sphere / d3, 1.0 / q) * std::pow(sphere / std::abs(d4), 1.0 / pc);
}

double bracket_kappa(double p_conj, double q) {
  if (!(p_conj < 0.0) || !(q < 0.0))
    throw ParameterError("inequalities::constant_bracket", "need p' < 0 and q < 0");
  const double s = p_conj + q;
  return std::pow(p_conj / s, -1.0 / q) * std::pow(q / s, -1.0 / p_conj);
}

ConstantBracket constant_bracket(double A, double p_conj, double q) {
  if (!(A > 0.0) || !std::isfinite(A))
    throw ParameterError("inequalities::constant_bracket", "A must be positive and finite");
  ConstantBracket b;
  b.A = A;
  b.kappa = bracket_kappa(p_conj, q);
  b.lower = b.kappa * A;
  b.upper = A;
  return b;
}

double stein_weiss_lower_constant(const InequalityParams& pr, double sphere) {
  const auto rep = validate_params(pr);
  if (!rep.admissible())
    throw ParameterError("inequalities::stein_weiss_lower_constant", rep.reason());
  const double kappa = bracket_kappa(pr.p_conj(), pr.q());
  switch (pr.variant) {
    case Variant::full:
      return std::pow(2.0, -pr.lambda - 1.0) * kappa *
             (analytic_A1(pr, sphere) + analytic_A2(pr, sphere));
    case Variant::improved_a:
      return std::pow(2.0, -pr.lambda) * kappa * analytic_A2(pr, sphere);
    case Variant::improved_b:
      return std::pow(2.0, -pr.lambda) * kappa * analytic_A1(pr, sphere);
  }
  return 0.0;
}

double sphere_exponent(const InequalityParams& pr) { return 1.0 / pr.q() + 1.0 / pr.p_conj(); }

}  // namespace revineq
