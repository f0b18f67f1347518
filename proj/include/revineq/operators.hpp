#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "revineq/group.hpp"
#include "revineq/profile.hpp"
#include "revineq/quadrature.hpp"

namespace revineq {

/// Power weight |x|^a. W is the outer weight and U the inner one in the
/// integral Hardy inequalities.
struct WeightSpec {
  enum class Role { outer, inner };
  double exponent = 0.0;
  Role role = Role::outer;
};

/// (|S| int |f|^p r^{ap} r^{Q-1} dr)^{1/p} = || |x|^a f ||_p, plus the part
/// of its uncertainty inherited from the |S| estimate.
struct LpValue {
  double value = 0.0;
  double stderr_estimate = 0.0;
  double radial = 0.0;  // the 1-D integral, without |S|
};

/// Integration range of the radial functionals: [spec.r_min, spec.r_max or inf).
LpValue lp_functional(const RadialProfile& f, double p, const QuasiNorm& norm,
                      const QuadratureSpec& spec, double weight_exponent = 0.0);

/// Same with |S| supplied by the caller (value, stderr).
LpValue lp_functional(const RadialProfile& f, double p, double Q, const IntegralResult& sphere,
                      double r_min, double r_max, double weight_exponent = 0.0);

/// int_G |y^{-1} x|^lambda u(|y|) dy. Directions are sampled (spec.sample_count
/// of them, enumerated when N = 1) and each radial line is integrated with a
/// composite Gauss-Legendre rule.
IntegralResult riesz_potential(const QuasiNorm& norm, const RadialProfile& u, double lambda,
                               const GroupPoint& x, const QuadratureSpec& spec);

/// B(f, h) = int int |x|^alpha |y^{-1} x|^lambda f(|x|) h(|y|) |y|^beta dx dy.
///
/// With x = D_{t rho} omega, y = D_rho eta the rho-integral factors out:
///   B = int_S int_S int_0^inf |eta^{-1} D_t omega|^lambda H(t) dt dsigma dsigma,
///   H(t) = t^{alpha+Q-1} int_0^inf rho^{alpha+beta+lambda+2Q-1} f(t rho) h(rho) drho.
/// H is tabulated on a uniform grid in log t (step spec.kernel_log_step) and
/// spec.sample_count direction pairs are sampled (enumerated when N = 1).
IntegralResult stein_weiss_form(const RadialProfile& f, const RadialProfile& h, double alpha,
                                double beta, double lambda, const QuasiNorm& norm,
                                const QuadratureSpec& spec);

struct HolderGap {
  double lhs = 0.0;  // int f g
  double rhs = 0.0;  // ||f||_p ||g||_{p'}
  double gap = 0.0;  // lhs - rhs
  double stderr_estimate = 0.0;
};

/// Discrete form: sums against the (positive) measure `mu`; empty mu means
/// counting measure.
HolderGap reverse_holder_gap(std::span<const double> f, std::span<const double> g, double p,
                             std::span<const double> mu = {});

/// Profile form over the radial range of `spec`.
HolderGap reverse_holder_gap(const RadialProfile& f, const RadialProfile& g, double p,
                             const QuasiNorm& norm, const QuadratureSpec& spec);

struct KernelBoundReport {
  std::size_t step1_pairs = 0;
  std::size_t step2_pairs = 0;
  std::size_t step1_violations = 0;  // 2^{-lambda}|x|^lambda > |y^{-1}x|^lambda with |y| <= |x|/2
  std::size_t step2_violations = 0;  // |y|/2 > |y^{-1}x| with 2|x| <= |y|
  double worst_step1 = 0.0;          // max of lower bound / kernel
  double worst_step2 = 0.0;

  bool passed() const { return step1_violations == 0 && step2_violations == 0; }
};

/// Samples `pairs` admissible pairs for each of the two pointwise bounds.
/// Needs a norm satisfying the triangle inequality.
KernelBoundReport check_kernel_bounds(const QuasiNorm& norm, double lambda, std::size_t pairs,
                                      std::uint64_t seed);

}  // namespace revineq
