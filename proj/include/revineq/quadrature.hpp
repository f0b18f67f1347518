#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "revineq/group.hpp"
#include "revineq/profile.hpp"

namespace revineq {

class Rng;

enum class Scheme { monte_carlo, tensor_grid };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

struct QuadratureSpec {
  Scheme scheme = Scheme::monte_carlo;
  std::size_t sample_count = 100000;
  /// Gauss-Legendre nodes per axis, split evenly over two panels at 0.
  std::size_t nodes_per_axis = 48;
  /// Truncation radius; empty means "chosen so the envelope mass beyond it
  /// is below 1e-8 of the total".
  std::optional<double> r_max;
  double r_min = 0.0;
  std::uint64_t seed = 1;
  /// 0 = hardware concurrency. Results do not depend on this value.
  unsigned threads = 0;
  /// Step in u = log t of the trapezoid grid used by the bilinear forms.
  double kernel_log_step = 0.02;

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double stderr_estimate = 0.0;
  std::size_t samples_used = 0;
};

using RadialFn = std::function<double(double)>;
using PointFn = std::function<double(const GroupPoint&)>;

/// int_{r_min}^{r_max} profile(r) r^{Q-1} dr. r_max may be +inf. Power-law
/// divergence at r -> 0 or r -> inf is detected and reported as a
/// DivergenceError instead of returning a meaningless number.
double integrate_radial(const RadialFn& profile, double Q, double r_min, double r_max,
                        double scale = 1.0);
double integrate_radial(const RadialProfile& profile, double Q, double r_min, double r_max);

/// Same as integrate_radial with the quadrature's own error estimate.
struct RadialIntegral {
  double value = 0.0;
  double error = 0.0;
};
RadialIntegral integrate_radial_detailed(const RadialFn& profile, double Q, double r_min,
                                         double r_max, double scale = 1.0);

/// Local log-log slope d log|g| / d log r of g(r) = profile(r) r^{Q-1}
/// near r (two-point estimate); NaN when g vanishes there.
double radial_power_exponent(const RadialFn& profile, double Q, double r);

/// Smallest R (doubling from `scale`) with int_R^inf w < tol * int_0^inf w,
/// w(r) = envelope(r) r^{Q-1}.
double truncation_radius(const RadialFn& envelope, double Q, double tol = 1e-8,
                         double scale = 1.0);

/// Samples r from a piecewise-constant density shaped like `weight` on
/// [r_min, r_max]; the density is known exactly so importance weights are
/// unbiased whatever the cell resolution.
class RadialSampler {
 public:
  RadialSampler(const RadialFn& weight, double r_min, double r_max, std::size_t cells = 2048);
  double sample(Rng& rng) const;
  double density(double r) const;
  double r_min() const noexcept { return edges_.front(); }
  double r_max() const noexcept { return edges_.back(); }

 private:
  std::vector<double> edges_;
  std::vector<double> cumulative_;  // normalized, size = cells + 1
  std::vector<double> dens_;        // per cell
};

/// Point on the unit quasi-sphere with its polar-decomposition weight
/// |S^{N-1}| J(theta) / |theta|^Q (theta uniform on the Euclidean sphere,
/// J(theta) = sum nu_i theta_i^2). The mean weight estimates |S|.
struct DirectionSample {
  GroupPoint omega;
  double weight = 0.0;
};

struct DirectionSet {
  std::vector<DirectionSample> samples;
  bool exact = false;  // N = 1: the two directions enumerated

  IntegralResult mean_weight() const;
};

DirectionSet sample_directions(const QuasiNorm& norm, std::size_t count, std::uint64_t seed,
                               std::uint64_t stream = 0);

/// Radial shape of the importance density for integrate_cartesian (the
/// r^{Q-1} factor is added internally).
struct RadialEnvelope {
  RadialFn shape = [](double) { return 1.0; };
  double scale = 1.0;
  bool bounded_support = false;  // shape vanishes beyond some radius
};

/// int_G integrand(x) dx over the truncated region r_min <= |x| <= R_max,
/// Haar measure = Lebesgue measure in the chart.
IntegralResult integrate_cartesian(const QuasiNorm& norm, const PointFn& integrand,
                                   const RadialEnvelope& envelope, const QuadratureSpec& spec,
                                   std::uint64_t stream = 0);

/// |S| = (int_G e^{-|x|} dx) / Gamma(Q), estimated with integrate_cartesian.
/// Cached per (group, norm, scheme, sample size, seed).
IntegralResult sphere_measure(const QuasiNorm& norm, const QuadratureSpec& spec);

struct PolarConsistencyReport {
  IntegralResult cartesian;
  IntegralResult sphere;
  double radial = 0.0;
  double polar_value = 0.0;
  double discrepancy = 0.0;
  double combined_stderr = 0.0;

  bool passed(double sigmas = 3.0) const;
};

/// Compares int_G g(|x|) dx against |S| int g(r) r^{Q-1} dr; the Cartesian
/// side uses an independent random stream.
PolarConsistencyReport polar_consistency_check(const QuasiNorm& norm, const RadialProfile& g,
                                               const QuadratureSpec& spec);

struct StochasticComparison {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double combined_stderr = 0.0;

  double discrepancy() const;
  bool passed(double sigmas = 3.0) const;
};

/// C^infinity bump exp(1 - 1/(1 - r^2)) for r < 1.
double unit_bump(double r);

/// int phi(y^{-1} x) dx against int phi(x) dx for `translations` random y.
std::vector<StochasticComparison> check_haar_invariance(const QuasiNorm& norm,
                                                        const QuadratureSpec& spec,
                                                        std::size_t translations = 5);

/// s^Q int phi(D_s x) dx against int phi(x) dx.
std::vector<StochasticComparison> check_dilation_scaling(const QuasiNorm& norm,
                                                         const QuadratureSpec& spec,
                                                         const std::vector<double>& factors);

/// Surface area of the Euclidean unit sphere S^{n-1}.
double euclidean_sphere_area(std::size_t n);

}  // namespace revineq
