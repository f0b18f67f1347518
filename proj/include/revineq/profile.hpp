#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace revineq {

/// A scalar function of r = |x| on (0, inf), with an optional analytic
/// derivative. Values at r >= support_radius() are zero.
class RadialProfile {
 public:
  using Fn = std::function<double(double)>;

  RadialProfile() = default;
  explicit RadialProfile(Fn value, Fn derivative = {}, std::string family_tag = "custom",
                         std::vector<double> params = {});

  double value(double r) const;
  double operator()(double r) const { return value(r); }
  /// Analytic when registered, else central differences with h = r*1e-6 + 1e-9.
  double derivative(double r) const;
  bool has_analytic_derivative() const noexcept { return static_cast<bool>(deriv_); }

  const std::string& family_tag() const noexcept { return tag_; }
  const std::vector<double>& params() const noexcept { return params_; }

  double support_radius() const noexcept { return support_; }
  RadialProfile& with_support(double radius);

  /// Characteristic radius; used to place quadrature breakpoints and grids.
  double scale() const noexcept { return scale_; }
  RadialProfile& with_scale(double scale);

  bool declared_decreasing() const noexcept { return decreasing_; }
  RadialProfile& with_decreasing(bool flag);

  /// c * f.
  RadialProfile scaled(double c) const;
  /// f o D_s, i.e. r -> f(s r).
  RadialProfile dilated(double s) const;

 private:
  Fn value_;
  Fn deriv_;
  std::string tag_ = "custom";
  std::vector<double> params_;
  double support_ = std::numeric_limits<double>::infinity();
  double scale_ = 1.0;
  bool decreasing_ = false;
};

/// R f = df/d|x|.
RadialProfile radial_derivative(const RadialProfile& f);
/// E f = |x| df/d|x|.
RadialProfile euler_apply(const RadialProfile& f);

/// 1 on [0, radius], 0 beyond.
RadialProfile radial_indicator(double radius);

/// Checks derivative <= 1e-8 * max|f| / r on an n-point log grid of [r_lo, r_hi].
/// Returns the first offending radius, if any.
std::optional<double> find_increase(const RadialProfile& f, double r_lo, double r_hi,
                                    std::size_t n = 1000);

}  // namespace revineq
