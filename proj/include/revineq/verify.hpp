#pragma once

#include <string>
#include <utility>
#include <vector>

#include "revineq/group.hpp"
#include "revineq/operators.hpp"
#include "revineq/params.hpp"
#include "revineq/profile.hpp"
#include "revineq/quadrature.hpp"

namespace revineq {

enum class Direction { reverse, forward };

/// Absolute floor added to the 3-sigma tolerance.
inline constexpr double kMarginFloor = 1e-9;

/// One verifier run. `rhs` is the right-hand side without the constant, so
/// the inequality reads lhs >= constant * rhs (reverse) or
/// lhs <= constant * rhs (forward) and ratio = lhs / rhs.
struct VerificationReport {
  std::string inequality;
  Direction direction = Direction::reverse;
  InequalityParams params;
  std::string norm_name;
  std::string group_name;
  std::vector<std::string> profiles;

  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double constant = 0.0;
  double ratio_stderr = 0.0;
  double constant_stderr = 0.0;
  double sphere = 0.0;
  double sphere_stderr = 0.0;
  std::size_t samples = 0;
  /// Named intermediate quantities (A1, A2, kappa, factor norms, ...).
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  /// >= 0 means the inequality holds: ratio - constant (reverse),
  /// constant - ratio (forward).
  double margin() const;
  double combined_stderr() const;
  double tolerance() const { return 3.0 * combined_stderr() + kMarginFloor; }
  bool pass() const { return margin() >= -tolerance(); }
};

enum class HardyVariant { ball, complement };

std::string to_string(HardyVariant v);
HardyVariant parse_hardy_variant(const std::string& name);

/// Reverse integral Hardy inequality with power weights W = |x|^{W.exponent},
/// U = |x|^{U.exponent}; constant kappa * A1 (ball) or kappa * A2 (complement).
/// A divergent outer integral gives LHS = (+inf)^{1/q} = 0.
VerificationReport verify_reverse_integral_hardy(HardyVariant variant, const WeightSpec& W,
                                                 const WeightSpec& U, const RadialProfile& f,
                                                 double p, double q, const QuasiNorm& norm,
                                                 const QuadratureSpec& spec);

/// Weights used by the proof of the reverse Stein-Weiss inequality:
/// ball W = |x|^{(alpha+lambda)q}, U = |y|^{-beta p};
/// complement W = |x|^{alpha q}, U = |y|^{-(beta+lambda)p}.
std::pair<WeightSpec, WeightSpec> stein_weiss_hardy_weights(HardyVariant variant,
                                                            const InequalityParams& params);

VerificationReport verify_stein_weiss(const RadialProfile& f, const RadialProfile& h,
                                      const InequalityParams& params, const QuasiNorm& norm,
                                      const QuadratureSpec& spec);

/// alpha = beta = 0 enforced.
VerificationReport verify_reverse_hls(const RadialProfile& f, const RadialProfile& h,
                                      const InequalityParams& params, const QuasiNorm& norm,
                                      const QuadratureSpec& spec);

VerificationReport verify_reverse_hardy(const RadialProfile& f, double p, const QuasiNorm& norm,
                                        const QuadratureSpec& spec);
VerificationReport verify_reverse_sobolev(const RadialProfile& f, double p, const QuasiNorm& norm,
                                          const QuadratureSpec& spec);
/// gamma = alpha + beta + 1 < Q.
VerificationReport verify_reverse_ckn(const RadialProfile& f, double p, double alpha, double beta,
                                      const QuasiNorm& norm, const QuadratureSpec& spec);

VerificationReport verify_forward_hardy(const RadialProfile& f, double p, const QuasiNorm& norm,
                                        const QuadratureSpec& spec);
VerificationReport verify_forward_sobolev(const RadialProfile& f, double p, const QuasiNorm& norm,
                                          const QuadratureSpec& spec);
VerificationReport verify_forward_ckn(const RadialProfile& f, double p, double alpha, double beta,
                                      const QuasiNorm& norm, const QuadratureSpec& spec);

/// Max relative deviation of the Stein-Weiss ratio over f o D_s, h o D_s
/// from its value at s = 1.
double stein_weiss_dilation_drift(const RadialProfile& f, const RadialProfile& h,
                                  const InequalityParams& params, const QuasiNorm& norm,
                                  const QuadratureSpec& spec, const std::vector<double>& scales);

/// Names accepted by the CLI for the verifiers above.
const std::vector<std::string>& inequality_names();

}  // namespace revineq
