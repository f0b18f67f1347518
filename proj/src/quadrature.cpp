#include "revineq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "revineq/errors.hpp"
#include "revineq/random.hpp"

namespace revineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlock = 4096;
constexpr double kOverflowGuard = 1e300;

std::string point_str(const GroupPoint& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

// Uniform direction on the Euclidean unit sphere, mapped to the quasi-sphere.
DirectionSample draw_direction(const QuasiNorm& norm, Rng& rng, double area) {
  const auto& g = norm.group();
  const std::size_t n = g.dim();
  GroupPoint theta(n);
  double e2 = 0.0;
  do {
    e2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      theta[i] = rng.normal();
      e2 += theta[i] * theta[i];
    }
  } while (e2 == 0.0);
  const double e = std::sqrt(e2);
  double jac = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] /= e;
    jac += g.weights()[i] * theta[i] * theta[i];
  }
  const double rho = norm(theta);
  DirectionSample out;
  out.omega = g.dilate(1.0 / rho, theta);
  out.weight = area * jac / std::pow(rho, g.homogeneous_dimension());
  return out;
}

double resolve_r_max(const QuasiNorm& norm, const RadialEnvelope& env, const QuadratureSpec& spec) {
  if (spec.r_max) return *spec.r_max;
  return truncation_radius(env.shape, norm.group().homogeneous_dimension(), 1e-8, env.scale);
}

IntegralResult cartesian_monte_carlo(const QuasiNorm& norm, const PointFn& integrand,
                                     const RadialEnvelope& env, const QuadratureSpec& spec,
                                     double r_max, std::uint64_t stream) {
  const auto& g = norm.group();
  const double Q = g.homogeneous_dimension();
  const double area = euclidean_sphere_area(g.dim());
  auto shape = env.shape;
  const RadialSampler sampler(
      [shape, Q](double r) { return std::abs(shape(r)) * std::pow(r, Q - 1.0); }, spec.r_min,
      r_max);

  const std::size_t n = spec.sample_count;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Moments> parts(blocks);
  parallel_for(blocks, spec.threads, [&](std::size_t b) {
    Rng rng(stream_seed(spec.seed, stream, b));
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    Moments m;
    for (std::size_t i = lo; i < hi; ++i) {
      const DirectionSample d = draw_direction(norm, rng, area);
      const double r = sampler.sample(rng);
      const GroupPoint x = g.dilate(r, d.omega);
      const double v = integrand(x);
      if (!std::isfinite(v))
        throw EvaluationError("quadrature::integrate_cartesian",
                              "non-finite integrand at " + point_str(x));
      const double contrib = v * d.weight * std::pow(r, Q - 1.0) / sampler.density(r);
      if (std::abs(contrib) > kOverflowGuard)
        throw DivergenceError("quadrature::integrate_cartesian",
                              "sample exceeds overflow guard at " + point_str(x));
      m.add(contrib);
    }
    parts[b] = m;
  });
  const Moments total = pairwise_reduce<Moments>(parts, Moments::merge);
  IntegralResult out;
  out.value = total.mean;
  out.stderr_estimate = total.stderr_of_mean();
  out.samples_used = n;
  if (!std::isfinite(out.value))
    throw DivergenceError("quadrature::integrate_cartesian", "estimate is not finite");
  return out;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(std::size_t n) {
  GaussRule rule;
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(n), z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes.push_back(z);
    rule.weights.push_back(w);
    if (z != 0.0) {
      rule.nodes.push_back(-z);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

double tensor_sum(const QuasiNorm& norm, const PointFn& integrand, const std::vector<double>& half,
                  std::size_t n, double r_min, double r_max, unsigned threads) {
  const std::size_t d = half.size();
  // Two panels per axis, [-1, 0] and [0, 1], so a kink at the origin does not
  // spoil the rule.
  const GaussRule base = gauss_legendre(std::max<std::size_t>(1, n / 2));
  GaussRule rule;
  for (double side : {-1.0, 1.0})
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(side * 0.5 * (1.0 + base.nodes[i]));
      rule.weights.push_back(0.5 * base.weights[i]);
    }
  n = rule.nodes.size();
  std::vector<double> slices(n);
  std::size_t inner = 1;
  for (std::size_t k = 1; k < d; ++k) inner *= n;
  parallel_for(n, threads, [&](std::size_t i0) {
    std::vector<double> acc;
    GroupPoint x(d);
    for (std::size_t j = 0; j < inner; ++j) {
      double w = half[0] * rule.weights[i0];
      x[0] = half[0] * rule.nodes[i0];
      std::size_t rest = j;
      for (std::size_t k = 1; k < d; ++k) {
        const std::size_t ik = rest % n;
        rest /= n;
        x[k] = half[k] * rule.nodes[ik];
        w *= half[k] * rule.weights[ik];
      }
      const double r = norm(x);
      if (r < r_min || r > r_max) continue;
      const double v = integrand(x);
      if (!std::isfinite(v))
        throw EvaluationError("quadrature::integrate_cartesian",
                              "non-finite integrand at " + point_str(x));
      acc.push_back(w * v);
    }
    slices[i0] = pairwise_sum(acc);
  });
  return pairwise_sum(slices);
}

IntegralResult cartesian_tensor(const QuasiNorm& norm, const PointFn& integrand,
                                const QuadratureSpec& spec, double r_max) {
  const auto& g = norm.group();
  const std::size_t d = g.dim();
  const std::size_t n = spec.nodes_per_axis;
  const double points = std::pow(static_cast<double>(n), static_cast<double>(d));
  if (points > 5e7)
    throw ParameterError("quadrature::integrate_cartesian",
                         "tensor grid too large: " + std::to_string(n) + "^" + std::to_string(d));
  const auto box = norm.unit_ball_box();
  std::vector<double> half(d);
  for (std::size_t i = 0; i < d; ++i) half[i] = box[i] * std::pow(r_max, g.weights()[i]);
  const double fine = tensor_sum(norm, integrand, half, n, spec.r_min, r_max, spec.threads);
  const std::size_t nc = std::max<std::size_t>(4, n / 2);
  const double coarse = tensor_sum(norm, integrand, half, nc, spec.r_min, r_max, spec.threads);
  IntegralResult out;
  out.value = fine;
  out.stderr_estimate = std::abs(fine - coarse) / 3.0;
  out.samples_used = static_cast<std::size_t>(points) +
                     static_cast<std::size_t>(std::pow(static_cast<double>(nc), static_cast<double>(d)));
  return out;
}

// Radial importance shape for x -> phi(y^{-1} x) with supp phi in the unit
// ball, built from a pilot histogram of |y z| over z with |z| <= 1. Any
// positive shape gives an unbiased estimate; this one only lowers variance.
struct PilotShape {
  double hi = 0.0;
  std::vector<double> bins;
  double operator()(double r) const {
    if (r >= hi) return 0.0;
    const auto i = static_cast<std::size_t>(r / hi * static_cast<double>(bins.size()));
    return bins[std::min(i, bins.size() - 1)];
  }
};

PilotShape translated_pilot(const QuasiNorm& norm, const GroupPoint& y, std::uint64_t seed) {
  const auto& g = norm.group();
  const double Q = g.homogeneous_dimension();
  Rng rng(stream_seed(seed, 0x7a11, 0));
  const double area = euclidean_sphere_area(g.dim());
  constexpr int kPilot = 20000;
  std::vector<double> rs(kPilot), ws(kPilot);
  double hi = 0.0;
  for (int i = 0; i < kPilot; ++i) {
    const DirectionSample d = draw_direction(norm, rng, area);
    const double u = i % 2 == 0 ? 1.0 : rng.uniform();
    rs[i] = norm(g.mul(y, g.dilate(u, d.omega)));
    ws[i] = d.weight * (i % 2 == 0 ? 0.0 : unit_bump(u) * std::pow(u, Q - 1.0));
    hi = std::max(hi, rs[i]);
  }
  PilotShape shape;
  shape.hi = 1.5 * hi;
  shape.bins.assign(64, 0.0);
  for (int i = 0; i < kPilot; ++i) {
    const auto k = static_cast<std::size_t>(rs[i] / shape.hi * 64.0);
    shape.bins[std::min<std::size_t>(k, 63)] += ws[i];
  }
  // Defensive mixture: half the pilot mass, half the plain volume measure,
  // so importance weights stay within a factor 2 of the uniform estimator.
  // The sampler multiplies by r^{Q-1}, so shapes are per unit volume.
  const double total = std::accumulate(shape.bins.begin(), shape.bins.end(), 0.0);
  const double vol_total = std::pow(shape.hi, Q);
  std::vector<double> smooth(64);
  for (std::size_t k = 0; k < 64; ++k) {
    const double a = shape.hi * static_cast<double>(k) / 64.0;
    const double b = shape.hi * static_cast<double>(k + 1) / 64.0;
    const double vol = std::pow(b, Q) - std::pow(a, Q);
    const double pilot_mass = total > 0.0 ? shape.bins[k] / total : 0.0;
    smooth[k] = (0.5 * pilot_mass + 0.5 * vol / vol_total) / vol;
  }
  shape.bins = std::move(smooth);
  return shape;
}

IntegralResult translated_bump_integral(const QuasiNorm& norm, const GroupPoint& y,
                                        const QuadratureSpec& spec, std::uint64_t stream) {
  const auto& g = norm.group();
  const PilotShape pilot = translated_pilot(norm, y, spec.seed);
  QuadratureSpec local = spec;
  local.scheme = Scheme::monte_carlo;
  local.r_min = 0.0;
  local.r_max = pilot.hi;
  RadialEnvelope env;
  env.shape = pilot;
  env.scale = pilot.hi;
  env.bounded_support = true;
  const GroupPoint yinv = g.inv(y);
  return integrate_cartesian(
      norm, [&](const GroupPoint& x) { return unit_bump(norm(g.mul(yinv, x))); }, env, local,
      stream);
}

// A non-radial test function supported in the unit ball.
double tilted_bump(const QuasiNorm& norm, const GroupPoint& x) {
  double tilt = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) tilt += (i + 1.0) * x[i];
  return unit_bump(norm(x)) * std::exp(tilt);
}

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::monte_carlo ? "monte_carlo" : "tensor_grid";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "monte_carlo") return Scheme::monte_carlo;
  if (name == "tensor_grid") return Scheme::tensor_grid;
  throw ParameterError("quadrature::parse_scheme", "unknown scheme '" + name + "'");
}

void QuadratureSpec::validate() const {
  const char* origin = "quadrature::QuadratureSpec";
  if (sample_count < 1) throw ParameterError(origin, "sample_count must be >= 1");
  if (nodes_per_axis < 4) throw ParameterError(origin, "nodes_per_axis must be >= 4");
  if (!(r_min >= 0.0) || !std::isfinite(r_min))
    throw ParameterError(origin, "inner cutoff must be finite and >= 0");
  if (r_max && !(*r_max > r_min))
    throw ParameterError(origin, "truncation radius must exceed the inner cutoff");
  if (!(kernel_log_step > 0.0 && kernel_log_step <= 1.0))
    throw ParameterError(origin, "kernel_log_step must lie in (0, 1]");
}

double radial_power_exponent(const RadialFn& profile, double Q, double r) {
  const double r2 = r * 1.01;
  const double v1 = std::abs(profile(r)), v2 = std::abs(profile(r2));
  if (std::isinf(v1) || std::isinf(v2)) return kInf;
  // Subnormal values carry too few digits for a slope; treat them like 0.
  constexpr double tiny = std::numeric_limits<double>::min();
  if (!(v1 >= tiny) || !(v2 >= tiny)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(v2 / v1) / std::log(1.01) + (Q - 1.0);
}

RadialIntegral integrate_radial_detailed(const RadialFn& profile, double Q, double r_min,
                                         double r_max, double scale) {
  const char* origin = "quadrature::integrate_radial";
  if (!(Q > 0.0)) throw ParameterError(origin, "Q must be positive");
  if (!(r_min >= 0.0) || !(r_max > r_min) || std::isnan(r_max))
    throw ParameterError(origin, "need 0 <= r_min < r_max");
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  double k0 = std::numeric_limits<double>::quiet_NaN();
  const double r0 = 1e-9 * scale;
  if (r_min == 0.0) {
    const double k = radial_power_exponent(profile, Q, r0);
    k0 = k;
    if (std::isinf(k) || (std::isfinite(k) && k <= -1.0 + 1e-3))
      throw DivergenceError(origin, "integrand not integrable at r = 0 (local power " +
                                        std::to_string(k) + ")");
  }
  bool algebraic_tail = false;
  if (std::isinf(r_max)) {
    const double k = radial_power_exponent(profile, Q, 1e7 * scale);
    if (std::isinf(k) || (std::isfinite(k) && k >= -1.0 - 1e-3))
      throw DivergenceError(origin, "integrand not integrable at infinity (local power " +
                                        std::to_string(k) + ")");
    algebraic_tail = std::isfinite(k);
  }

  auto g = [&](double r) {
    const double v = profile(r);
    // Abscissae next to r = 0 can overflow the profile alone even though
    // profile * r^{Q-1} stays integrable; continue the local power law there.
    if (!std::isfinite(v) && r < r0 && std::isfinite(k0))
      return profile(r0) * std::pow(r0, Q - 1.0) * std::pow(r / r0, k0);
    if (!std::isfinite(v))
      throw EvaluationError(origin, "non-finite profile value at r = " + std::to_string(r));
    if (v == 0.0) return 0.0;
    return v * std::pow(r, Q - 1.0);
  };

  constexpr double tol = 1e-13;
  RadialIntegral out;
  auto finite_piece = [&](double a, double b) {
    if (!(b > a)) return;
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    // Shifted to [0, b - a]: keeps abscissae near the left end distinct
    // from it in floating point.
    out.value += ts.integrate([&](double u) { return g(a + u); }, 0.0, b - a, tol, &err);
    out.error += err;
  };
  std::vector<double> cuts{r_min};
  for (double c : {scale, 8.0 * scale, 64.0 * scale})
    if (c > cuts.back() && c < r_max) cuts.push_back(c);
  if (std::isfinite(r_max)) {
    cuts.push_back(r_max);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) finite_piece(cuts[i], cuts[i + 1]);
  } else {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) finite_piece(cuts[i], cuts[i + 1]);
    const double left = cuts.back();
    double err = 0.0;
    if (algebraic_tail) {
      // exp_sinh stops sampling long before a slow power tail has decayed.
      // Integrate in log r up to R and add the tail of the local power law.
      const double R = std::max(1e12 * scale, 1e4 * left);
      boost::math::quadrature::tanh_sinh<double> ts;
      out.value += ts.integrate(
          [&](double u) {
            const double r = std::exp(u);
            return g(r) * r;
          },
          std::log(left), std::log(R), tol, &err);
      out.error += err;
      const double gR = g(R);
      if (gR != 0.0) {
        const double k = radial_power_exponent(profile, Q, R);
        if (!(k < -1.0))
          throw DivergenceError(origin, "integrand not integrable at infinity (local power " +
                                            std::to_string(k) + ")");
        const double tail = gR * R / (-k - 1.0);
        out.value += tail;
        out.error += std::abs(tail) * 1e-10;
      }
    } else {
      boost::math::quadrature::exp_sinh<double> es;
      out.value += es.integrate([&](double u) { return g(left + u); }, 0.0, kInf, tol, &err);
      out.error += err;
    }
  }
  if (!std::isfinite(out.value))
    throw DivergenceError(origin, "radial integral is not finite");
  return out;
}

double integrate_radial(const RadialFn& profile, double Q, double r_min, double r_max,
                        double scale) {
  return integrate_radial_detailed(profile, Q, r_min, r_max, scale).value;
}

double integrate_radial(const RadialProfile& profile, double Q, double r_min, double r_max) {
  const double upper = std::min(r_max, profile.support_radius());
  if (!(upper > r_min)) return 0.0;
  return integrate_radial([&profile](double r) { return profile.value(r); }, Q, r_min, upper,
                          profile.scale());
}

double truncation_radius(const RadialFn& envelope, double Q, double tol, double scale) {
  const double total = integrate_radial(envelope, Q, 0.0, kInf, scale);
  if (!(total > 0.0))
    throw DegenerateInputError("quadrature::truncation_radius", "envelope has zero mass");
  double R = scale;
  for (int i = 0; i < 80; ++i) {
    if (integrate_radial(envelope, Q, R, kInf, scale) < tol * total) return R;
    R *= 2.0;
  }
  throw DivergenceError("quadrature::truncation_radius", "envelope tail does not decay");
}

RadialSampler::RadialSampler(const RadialFn& weight, double r_min, double r_max,
                             std::size_t cells) {
  if (!(r_max > r_min) || !(r_min >= 0.0) || !std::isfinite(r_max) || cells < 2)
    throw ParameterError("quadrature::RadialSampler", "need 0 <= r_min < r_max < inf");
  edges_.reserve(cells + 1);
  std::size_t geo = cells;
  double lo = r_min;
  if (r_min == 0.0) {
    edges_.push_back(0.0);
    lo = r_max * 1e-8;
    geo = cells - 1;
  }
  const double ratio = std::log(r_max / lo) / static_cast<double>(geo);
  for (std::size_t i = 0; i <= geo; ++i)
    edges_.push_back(i == geo ? r_max : lo * std::exp(ratio * static_cast<double>(i)));

  const std::size_t m = edges_.size() - 1;
  std::vector<double> mass(m);
  double mmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = edges_[i], b = edges_[i + 1];
    const double w = std::max({std::abs(weight(a)), std::abs(weight(0.5 * (a + b))),
                               std::abs(weight(b))});
    mass[i] = std::isfinite(w) ? w * (b - a) : 0.0;
    mmax = std::max(mmax, mass[i]);
  }
  if (!(mmax > 0.0)) mmax = 1.0;
  for (auto& v : mass) v = std::max(v, 1e-12 * mmax);
  const double total = pairwise_sum(mass);
  cumulative_.assign(m + 1, 0.0);
  dens_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    cumulative_[i + 1] = cumulative_[i] + mass[i] / total;
    dens_[i] = mass[i] / (total * (edges_[i + 1] - edges_[i]));
  }
  cumulative_.back() = 1.0;
}

double RadialSampler::sample(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  i = std::clamp<std::size_t>(i, 1, dens_.size()) - 1;
  const double a = edges_[i], b = edges_[i + 1];
  double r = a + (b - a) * rng.uniform();
  if (r <= 0.0) r = 0.5 * (a + b);
  return r;
}

double RadialSampler::density(double r) const {
  if (r < edges_.front() || r > edges_.back()) return 0.0;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - edges_.begin());
  i = std::clamp<std::size_t>(i, 1, dens_.size()) - 1;
  return dens_[i];
}

IntegralResult DirectionSet::mean_weight() const {
  Moments m;
  for (const auto& s : samples) m.add(s.weight);
  IntegralResult out;
  out.value = m.mean;
  out.stderr_estimate = exact ? 0.0 : m.stderr_of_mean();
  out.samples_used = samples.size();
  return out;
}

DirectionSet sample_directions(const QuasiNorm& norm, std::size_t count, std::uint64_t seed,
                               std::uint64_t stream) {
  const auto& g = norm.group();
  DirectionSet set;
  const double area = euclidean_sphere_area(g.dim());
  if (g.dim() == 1) {
    set.exact = true;
    for (double sgn : {1.0, -1.0}) {
      GroupPoint theta{sgn};
      const double rho = norm(theta);
      set.samples.push_back(
          {g.dilate(1.0 / rho, theta),
           area * g.weights()[0] / std::pow(rho, g.homogeneous_dimension())});
    }
    return set;
  }
  if (count < 1) throw ParameterError("quadrature::sample_directions", "count must be >= 1");
  set.samples.reserve(count);
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng(stream_seed(seed, stream, b));
    const std::size_t hi = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < hi; ++i) set.samples.push_back(draw_direction(norm, rng, area));
  }
  return set;
}

IntegralResult integrate_cartesian(const QuasiNorm& norm, const PointFn& integrand,
                                   const RadialEnvelope& envelope, const QuadratureSpec& spec,
                                   std::uint64_t stream) {
  spec.validate();
  const double r_max = resolve_r_max(norm, envelope, spec);
  if (!(r_max > spec.r_min))
    throw ParameterError("quadrature::integrate_cartesian",
                         "truncation radius must exceed the inner cutoff");
  if (spec.scheme == Scheme::tensor_grid) return cartesian_tensor(norm, integrand, spec, r_max);
  return cartesian_monte_carlo(norm, integrand, envelope, spec, r_max, stream);
}

IntegralResult sphere_measure(const QuasiNorm& norm, const QuadratureSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, IntegralResult> cache;
  spec.validate();
  std::ostringstream key;
  key << norm.key() << '|' << to_string(spec.scheme) << '|' << spec.sample_count << '|'
      << spec.nodes_per_axis << '|' << spec.seed;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  const double Q = norm.group().homogeneous_dimension();
  QuadratureSpec local = spec;
  local.r_min = 0.0;
  local.r_max = truncation_radius([](double r) { return std::exp(-r); }, Q, 1e-14);
  RadialEnvelope env;
  env.shape = [](double r) { return std::exp(-r); };
  const IntegralResult raw = integrate_cartesian(
      norm, [&norm](const GroupPoint& x) { return std::exp(-norm(x)); }, env, local, 0x5e4e);
  const double gamma_trunc = std::tgamma(Q) * boost::math::gamma_p(Q, *local.r_max);
  IntegralResult out{raw.value / gamma_trunc, raw.stderr_estimate / gamma_trunc, raw.samples_used};
  if (!(out.value > 0.0))
    throw EstimationError("quadrature::sphere_measure", "non-positive sphere measure estimate");
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key.str(), out).first->second;
}

bool PolarConsistencyReport::passed(double sigmas) const {
  return discrepancy <= sigmas * combined_stderr + 1e-9 * std::abs(polar_value);
}

PolarConsistencyReport polar_consistency_check(const QuasiNorm& norm, const RadialProfile& g,
                                               const QuadratureSpec& spec) {
  const double Q = norm.group().homogeneous_dimension();
  RadialEnvelope env;
  env.shape = [g](double r) { return std::abs(g.value(r)); };
  env.scale = g.scale();
  env.bounded_support = std::isfinite(g.support_radius());
  QuadratureSpec local = spec;
  if (!local.r_max) local.r_max = resolve_r_max(norm, env, spec);

  PolarConsistencyReport rep;
  rep.sphere = sphere_measure(norm, spec);
  rep.radial = integrate_radial(g, Q, local.r_min, *local.r_max);
  rep.cartesian = integrate_cartesian(
      norm, [&](const GroupPoint& x) { return g.value(norm(x)); }, env, local, 0xca27);
  rep.polar_value = rep.sphere.value * rep.radial;
  rep.discrepancy = std::abs(rep.cartesian.value - rep.polar_value);
  rep.combined_stderr = std::hypot(rep.cartesian.stderr_estimate,
                                   std::abs(rep.radial) * rep.sphere.stderr_estimate);
  return rep;
}

double StochasticComparison::discrepancy() const { return std::abs(lhs - rhs); }

bool StochasticComparison::passed(double sigmas) const {
  return discrepancy() <= sigmas * combined_stderr + 1e-9 * std::abs(rhs);
}

double unit_bump(double r) {
  if (!(r < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

std::vector<StochasticComparison> check_haar_invariance(const QuasiNorm& norm,
                                                        const QuadratureSpec& spec,
                                                        std::size_t translations) {
  const auto& g = norm.group();
  std::vector<StochasticComparison> out;
  const IntegralResult base = translated_bump_integral(norm, g.identity(), spec, 0x4a00);
  Rng rng(stream_seed(spec.seed, 0x4a4a, 0));
  for (std::size_t k = 0; k < translations; ++k) {
    GroupPoint y = random_point(g, rng, 0.5);
    y = g.dilate((0.25 + 0.75 * rng.uniform()) / norm(y), y);
    const IntegralResult moved = translated_bump_integral(norm, y, spec, 0x4a01 + k);
    StochasticComparison c;
    c.label = "translate by " + point_str(y);
    c.lhs = moved.value;
    c.rhs = base.value;
    c.combined_stderr = std::hypot(moved.stderr_estimate, base.stderr_estimate);
    out.push_back(c);
  }
  return out;
}

std::vector<StochasticComparison> check_dilation_scaling(const QuasiNorm& norm,
                                                         const QuadratureSpec& spec,
                                                         const std::vector<double>& factors) {
  const auto& g = norm.group();
  const double Q = g.homogeneous_dimension();
  auto dilated_integral = [&](double s, std::uint64_t stream) {
    QuadratureSpec local = spec;
    local.scheme = Scheme::monte_carlo;
    local.r_min = 0.0;
    local.r_max = 1.0 / s;
    RadialEnvelope env;
    env.shape = [s](double r) { return unit_bump(s * r); };
    env.scale = 1.0 / s;
    env.bounded_support = true;
    return integrate_cartesian(
        norm, [&](const GroupPoint& x) { return tilted_bump(norm, g.dilate(s, x)); }, env, local,
        stream);
  };
  const IntegralResult base = dilated_integral(1.0, 0xd100);
  std::vector<StochasticComparison> out;
  std::uint64_t stream = 0xd101;
  for (double s : factors) {
    if (!(s > 0.0)) throw ParameterError("quadrature::check_dilation_scaling", "s must be positive");
    const IntegralResult scaled = dilated_integral(s, stream++);
    const double f = std::pow(s, Q);
    StochasticComparison c;
    c.label = "s = " + std::to_string(s);
    c.lhs = f * scaled.value;
    c.rhs = base.value;
    c.combined_stderr = std::hypot(f * scaled.stderr_estimate, base.stderr_estimate);
    out.push_back(c);
  }
  return out;
}

double euclidean_sphere_area(std::size_t n) {
  const double h = 0.5 * static_cast<double>(n);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

}  // namespace revineq
