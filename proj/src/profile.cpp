#include "revineq/profile.hpp"

#include <algorithm>
#include <cmath>

#include "revineq/errors.hpp"

namespace revineq {

RadialProfile::RadialProfile(Fn value, Fn derivative, std::string family_tag,
                             std::vector<double> params)
    : value_(std::move(value)),
      deriv_(std::move(derivative)),
      tag_(std::move(family_tag)),
      params_(std::move(params)) {
  if (!value_) throw ParameterError("operators::RadialProfile", "profile needs a value function");
}

double RadialProfile::value(double r) const {
  if (r >= support_) return 0.0;
  return value_(r);
}

double RadialProfile::derivative(double r) const {
  if (r >= support_) return 0.0;
  double d;
  if (deriv_) {
    d = deriv_(r);
  } else {
    const double h = r * 1e-6 + 1e-9;
    d = r - h > 0.0 ? (value(r + h) - value(r - h)) / (2.0 * h) : (value(r + h) - value(r)) / h;
  }
  if (!std::isfinite(d))
    throw EvaluationError("operators::radial_derivative",
                          "non-finite derivative at r = " + std::to_string(r));
  return d;
}

RadialProfile& RadialProfile::with_support(double radius) {
  if (!(radius > 0.0))
    throw ParameterError("operators::RadialProfile", "support radius must be positive");
  support_ = radius;
  return *this;
}

RadialProfile& RadialProfile::with_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParameterError("operators::RadialProfile", "scale must be positive and finite");
  scale_ = scale;
  return *this;
}

RadialProfile& RadialProfile::with_decreasing(bool flag) {
  decreasing_ = flag;
  return *this;
}

RadialProfile RadialProfile::scaled(double c) const {
  RadialProfile out = *this;
  auto v = value_;
  out.value_ = [v, c](double r) { return c * v(r); };
  if (deriv_) {
    auto d = deriv_;
    out.deriv_ = [d, c](double r) { return c * d(r); };
  }
  if (c < 0.0) out.decreasing_ = false;
  return out;
}

RadialProfile RadialProfile::dilated(double s) const {
  if (!(s > 0.0)) throw ParameterError("operators::RadialProfile::dilated", "s must be positive");
  RadialProfile out = *this;
  auto v = value_;
  out.value_ = [v, s](double r) { return v(s * r); };
  if (deriv_) {
    auto d = deriv_;
    out.deriv_ = [d, s](double r) { return s * d(s * r); };
  }
  out.support_ = support_ / s;
  out.scale_ = scale_ / s;
  return out;
}

RadialProfile radial_derivative(const RadialProfile& f) {
  RadialProfile g([f](double r) { return f.derivative(r); }, {}, "d(" + f.family_tag() + ")",
                  f.params());
  g.with_scale(f.scale());
  if (std::isfinite(f.support_radius())) g.with_support(f.support_radius());
  return g;
}

RadialProfile euler_apply(const RadialProfile& f) {
  RadialProfile g([f](double r) { return r * f.derivative(r); }, {}, "E(" + f.family_tag() + ")",
                  f.params());
  g.with_scale(f.scale());
  if (std::isfinite(f.support_radius())) g.with_support(f.support_radius());
  return g;
}

RadialProfile radial_indicator(double radius) {
  RadialProfile f([](double) { return 1.0; }, [](double) { return 0.0; }, "indicator", {radius});
  f.with_support(radius).with_scale(radius).with_decreasing(true);
  return f;
}

std::optional<double> find_increase(const RadialProfile& f, double r_lo, double r_hi,
                                    std::size_t n) {
  if (n < 2 || !(r_lo > 0.0) || !(r_hi > r_lo))
    throw ParameterError("operators::find_increase", "need 0 < r_lo < r_hi and n >= 2");
  const double ratio = std::log(r_hi / r_lo) / static_cast<double>(n - 1);
  double vmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(f.value(r_lo * std::exp(ratio * i))));
  const double tol = 1e-8 * std::max(vmax, 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = r_lo * std::exp(ratio * static_cast<double>(i));
    if (r >= f.support_radius()) break;
    if (f.derivative(r) > tol / r) return r;
  }
  return std::nullopt;
}

}  // namespace revineq
