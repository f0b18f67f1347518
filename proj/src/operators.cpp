#include "revineq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "revineq/errors.hpp"
#include "revineq/random.hpp"

namespace revineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kStreamOmega = 0x5701;
constexpr std::uint64_t kStreamEta = 0x5702;
constexpr std::uint64_t kStreamRiesz = 0x5703;

double upper_limit(const QuadratureSpec& spec) { return spec.r_max ? *spec.r_max : kInf; }

// Composite 30-point Gauss-Legendre nodes on [0, R] with breakpoints.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

RadialRule composite_rule(std::vector<double> breaks) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  RadialRule rule;
  const auto& abs = Rule::abscissa();
  const auto& wts = Rule::weights();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < abs.size(); ++k) {
      rule.nodes.push_back(mid + half * abs[k]);
      rule.weights.push_back(half * wts[k]);
      if (abs[k] != 0.0) {
        rule.nodes.push_back(mid - half * abs[k]);
        rule.weights.push_back(half * wts[k]);
      }
    }
  }
  return rule;
}

// Direction pairs with their joint weight. Enumerated exactly when N = 1.
struct PairSet {
  std::vector<DirectionSample> first;
  std::vector<DirectionSample> second;
  bool exact = false;
};

PairSet direction_pairs(const QuasiNorm& norm, std::size_t count, std::uint64_t seed) {
  PairSet ps;
  const DirectionSet a = sample_directions(norm, count, seed, kStreamOmega);
  const DirectionSet b = sample_directions(norm, count, seed, kStreamEta);
  if (a.exact) {
    ps.exact = true;
    for (const auto& s : a.samples)
      for (const auto& t : b.samples) {
        ps.first.push_back(s);
        ps.second.push_back(t);
      }
  } else {
    ps.first = a.samples;
    ps.second = b.samples;
  }
  return ps;
}

}  // namespace

LpValue lp_functional(const RadialProfile& f, double p, double Q, const IntegralResult& sphere,
                      double r_min, double r_max, double weight_exponent) {
  const char* origin = "operators::lp_functional";
  if (p == 0.0 || !std::isfinite(p)) throw ParameterError(origin, "p must be finite and nonzero");
  if (!std::isfinite(weight_exponent)) throw ParameterError(origin, "weight exponent must be finite");
  if (!(sphere.value > 0.0)) throw ParameterError(origin, "sphere measure must be positive");
  if (p < 0.0 && f.support_radius() < r_max)
    throw DegenerateInputError(origin, "profile vanishes for |x| >= " +
                                           std::to_string(f.support_radius()) +
                                           " and 0^p = +inf for p < 0");
  const double upper = std::min(r_max, f.support_radius());
  LpValue out;
  if (!(upper > r_min)) {
    if (p < 0.0) throw DegenerateInputError(origin, "empty integration range with p < 0");
    return out;
  }
  const double ap = weight_exponent * p;
  out.radial = integrate_radial(
      [&](double r) {
        const double v = std::abs(f.value(r));
        if (v == 0.0) {
          if (p < 0.0)
            throw DegenerateInputError(origin, "profile vanishes at r = " + std::to_string(r) +
                                                   " and 0^p = +inf for p < 0");
          return 0.0;
        }
        return std::pow(v, p) * (ap == 0.0 ? 1.0 : std::pow(r, ap));
      },
      Q, r_min, upper, f.scale());
  if (out.radial == 0.0) {
    if (p < 0.0) throw DegenerateInputError(origin, "zero integral with p < 0");
    return out;
  }
  out.value = std::pow(sphere.value * out.radial, 1.0 / p);
  out.stderr_estimate = std::abs(out.value / p) * sphere.stderr_estimate / sphere.value;
  return out;
}

LpValue lp_functional(const RadialProfile& f, double p, const QuasiNorm& norm,
                      const QuadratureSpec& spec, double weight_exponent) {
  spec.validate();
  return lp_functional(f, p, norm.group().homogeneous_dimension(), sphere_measure(norm, spec),
                       spec.r_min, upper_limit(spec), weight_exponent);
}

IntegralResult riesz_potential(const QuasiNorm& norm, const RadialProfile& u, double lambda,
                               const GroupPoint& x, const QuadratureSpec& spec) {
  const char* origin = "operators::riesz_potential";
  spec.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError(origin, "lambda must be positive");
  const auto& g = norm.group();
  if (x.size() != g.dim()) throw ShapeError(origin, "point dimension does not match the group");
  const double Q = g.homogeneous_dimension();
  const double rx = norm(x);

  double R = std::min(upper_limit(spec), u.support_radius());
  if (std::isinf(R)) {
    try {
      R = truncation_radius(
          [&](double r) { return std::abs(u.value(r)) * std::pow(r + rx + 1.0, lambda); }, Q,
          1e-14, u.scale());
    } catch (const DivergenceError& e) {
      throw DivergenceError(origin, std::string("kernel growth beats the decay of u: ") + e.what());
    }
  }
  std::vector<double> breaks{spec.r_min, R};
  for (double c = R / 2.0; c > R * 1e-6 && c > spec.r_min; c /= 2.0) breaks.push_back(c);
  if (rx > spec.r_min && rx < R) breaks.push_back(rx);
  if (u.scale() > spec.r_min && u.scale() < R) breaks.push_back(u.scale());
  const RadialRule rule = composite_rule(breaks);
  std::vector<double> radial_w(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double r = rule.nodes[k];
    radial_w[k] = rule.weights[k] * u.value(r) * std::pow(r, Q - 1.0);
    if (!std::isfinite(radial_w[k]))
      throw EvaluationError(origin, "non-finite profile value at r = " + std::to_string(r));
  }

  const DirectionSet dirs = sample_directions(norm, spec.sample_count, spec.seed, kStreamRiesz);
  const std::size_t n = dirs.samples.size();
  std::vector<double> vals(n);
  parallel_for(n, spec.threads, [&](std::size_t i) {
    const auto& d = dirs.samples[i];
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      if (radial_w[k] == 0.0) continue;
      const GroupPoint y = g.dilate(rule.nodes[k], d.omega);
      acc += radial_w[k] * std::pow(norm(g.mul(g.inv(y), x)), lambda);
    }
    vals[i] = d.weight * acc;
  });
  Moments m;
  for (double v : vals) m.add(v);
  IntegralResult out;
  out.value = m.mean;
  out.stderr_estimate = dirs.exact ? 0.0 : m.stderr_of_mean();
  out.samples_used = n;
  if (!std::isfinite(out.value)) throw DivergenceError(origin, "potential is not finite");
  return out;
}

IntegralResult stein_weiss_form(const RadialProfile& f, const RadialProfile& h, double alpha,
                                double beta, double lambda, const QuasiNorm& norm,
                                const QuadratureSpec& spec) {
  const char* origin = "operators::stein_weiss_form";
  spec.validate();
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(lambda >= 0.0) || !std::isfinite(lambda))
    throw ParameterError(origin, "alpha, beta must be finite and lambda >= 0");
  const auto& g = norm.group();
  const double Q = g.homogeneous_dimension();
  const double E = alpha + beta + lambda + 2.0 * Q;
  if (!(E > 0.0)) throw ParameterError(origin, "alpha + beta + lambda + 2Q must be positive");

  auto H = [&](double t) {
    const double upper = std::min(f.support_radius() / t, h.support_radius());
    double inner = 0.0;
    if (upper > 0.0) {
      const double scale = std::min(f.scale() / t, h.scale());
      try {
        inner = integrate_radial([&](double rho) { return f.value(t * rho) * h.value(rho); }, E,
                                 0.0, upper, scale);
      } catch (const DivergenceError& e) {
        throw DivergenceError(origin, std::string("inner radial integral diverges: ") + e.what());
      }
    }
    return std::pow(t, alpha + Q - 1.0) * inner;
  };
  auto envelope = [&](double t, double Ht) {
    if (Ht == 0.0) return 0.0;
    const double v = std::exp(std::log(std::abs(Ht)) + std::log(t) + lambda * std::log1p(t));
    if (!std::isfinite(v))
      throw DivergenceError(origin, "kernel-weighted profile overflows at t = " + std::to_string(t));
    return v;
  };

  // H(t) lives on u = log t in [-45, 45]. A coarse scan locates the part of
  // that range where H matters; the fine grid (step spec.kernel_log_step)
  // is only filled in there.
  constexpr double kHalf = 45.0, kCoarse = 0.5;
  const auto C = static_cast<std::size_t>(2.0 * kHalf / kCoarse);
  std::vector<double> coarse(C + 1);
  double env_max = 0.0;
  for (std::size_t c = 0; c <= C; ++c) {
    const double t = std::exp(-kHalf + kCoarse * static_cast<double>(c));
    coarse[c] = envelope(t, H(t));
    env_max = std::max(env_max, coarse[c]);
  }
  IntegralResult out;
  if (env_max == 0.0) return out;
  if (coarse.front() > 1e-10 * env_max || coarse.back() > 1e-10 * env_max)
    throw DivergenceError(origin, "integrand has not decayed at the edge of the log-t grid; "
                                  "the profiles do not decay fast enough for this lambda");
  std::size_t c_lo = 0, c_hi = C;
  while (c_lo < C && coarse[c_lo + 1] < 1e-20 * env_max) ++c_lo;
  while (c_hi > 0 && coarse[c_hi - 1] < 1e-20 * env_max) --c_hi;
  const double du = spec.kernel_log_step;
  const double u_lo = -kHalf + kCoarse * static_cast<double>(c_lo);
  const double u_hi = -kHalf + kCoarse * static_cast<double>(c_hi);
  const auto k_lo = static_cast<std::size_t>(std::floor((u_lo + kHalf) / du));
  const auto k_hi = static_cast<std::size_t>(std::ceil((u_hi + kHalf) / du));

  std::vector<double> ts, Hs, env;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double t = std::exp(-kHalf + du * static_cast<double>(k));
    const double Ht = H(t);
    ts.push_back(t);
    Hs.push_back(Ht);
    env.push_back(envelope(t, Ht));
    env_max = std::max(env_max, env.back());
  }
  std::vector<double> tk, wk;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (env[k] < 1e-16 * env_max) continue;
    tk.push_back(ts[k]);
    wk.push_back(du * Hs[k] * ts[k]);
  }

  const PairSet pairs = direction_pairs(norm, spec.sample_count, spec.seed);
  const std::size_t n = pairs.first.size();
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Moments> parts(blocks);
  parallel_for(blocks, spec.threads, [&](std::size_t b) {
    Moments m;
    const std::size_t hi = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < hi; ++i) {
      const GroupPoint eta_inv = g.inv(pairs.second[i].omega);
      const GroupPoint& omega = pairs.first[i].omega;
      double acc = 0.0;
      for (std::size_t k = 0; k < tk.size(); ++k) {
        const double kern = norm(g.mul(eta_inv, g.dilate(tk[k], omega)));
        acc += wk[k] * (lambda == 0.0 ? 1.0 : std::pow(kern, lambda));
      }
      m.add(pairs.first[i].weight * pairs.second[i].weight * acc);
    }
    parts[b] = m;
  });
  const Moments total = pairwise_reduce<Moments>(parts, Moments::merge);
  out.value = total.mean;
  out.stderr_estimate = pairs.exact ? 0.0 : total.stderr_of_mean();
  out.samples_used = n;
  if (!std::isfinite(out.value)) throw DivergenceError(origin, "form is not finite");
  return out;
}

HolderGap reverse_holder_gap(std::span<const double> f, std::span<const double> g, double p,
                             std::span<const double> mu) {
  const char* origin = "operators::reverse_holder_gap";
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  if (f.size() != g.size() || (!mu.empty() && mu.size() != f.size()))
    throw ShapeError(origin, "f, g and mu must have the same length");
  if (f.empty()) throw ShapeError(origin, "empty input");
  const double pc = p / (p - 1.0);
  std::vector<double> fg(f.size()), fp(f.size()), gp(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = mu.empty() ? 1.0 : mu[i];
    if (!(f[i] >= 0.0) || !std::isfinite(f[i]) || !(m > 0.0) || !std::isfinite(m))
      throw ParameterError(origin, "f must be finite and nonnegative, mu positive");
    if (!(g[i] > 0.0) || !std::isfinite(g[i]))
      throw DegenerateInputError(origin, "g must be strictly positive (0^{p'} = +inf)");
    fg[i] = f[i] * g[i] * m;
    fp[i] = std::pow(f[i], p) * m;
    gp[i] = std::pow(g[i], pc) * m;
  }
  HolderGap out;
  out.lhs = pairwise_sum(fg);
  out.rhs = std::pow(pairwise_sum(fp), 1.0 / p) * std::pow(pairwise_sum(gp), 1.0 / pc);
  out.gap = out.lhs - out.rhs;
  return out;
}

HolderGap reverse_holder_gap(const RadialProfile& f, const RadialProfile& g, double p,
                             const QuasiNorm& norm, const QuadratureSpec& spec) {
  const char* origin = "operators::reverse_holder_gap";
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  spec.validate();
  const double Q = norm.group().homogeneous_dimension();
  const IntegralResult S = sphere_measure(norm, spec);
  const double r_max = upper_limit(spec);
  const double pc = p / (p - 1.0);
  const LpValue gn = lp_functional(g, pc, Q, S, spec.r_min, r_max);
  const LpValue fn = lp_functional(f, p, Q, S, spec.r_min, r_max);
  const double upper = std::min({r_max, f.support_radius(), g.support_radius()});
  const double fg = upper > spec.r_min
                        ? integrate_radial([&](double r) { return f.value(r) * g.value(r); }, Q,
                                           spec.r_min, upper, f.scale())
                        : 0.0;
  HolderGap out;
  out.lhs = S.value * fg;
  out.rhs = fn.value * gn.value;
  out.gap = out.lhs - out.rhs;
  // Every term is homogeneous of degree one in |S|.
  out.stderr_estimate = std::abs(out.gap) * S.stderr_estimate / S.value;
  return out;
}

KernelBoundReport check_kernel_bounds(const QuasiNorm& norm, double lambda, std::size_t pairs,
                                      std::uint64_t seed) {
  const char* origin = "operators::check_kernel_bounds";
  if (!norm.is_true_norm())
    throw PreconditionError(origin, "the bounds use the triangle inequality; " + norm.name() +
                                        " is not declared a norm");
  if (!(lambda > 0.0)) throw ParameterError(origin, "lambda must be positive");
  const auto& g = norm.group();
  Rng rng(stream_seed(seed, 0xb0b0, 0));
  KernelBoundReport rep;
  constexpr double slack = 1.0 + 1e-12;
  for (std::size_t i = 0; i < pairs; ++i) {
    const GroupPoint x = random_point(g, rng, 1.0);
    GroupPoint y = random_point(g, rng, 1.0);
    const double nx = norm(x);
    // |y| = u |x| / 2 with u in (0, 1]; u = 1 is the boundary case.
    const double u = i % 16 == 0 ? 1.0 : rng.uniform_open0();
    y = g.dilate(u * nx / (2.0 * norm(y)), y);
    const double kernel = std::pow(norm(g.mul(g.inv(y), x)), lambda);
    const double lower = std::pow(2.0, -lambda) * std::pow(nx, lambda);
    ++rep.step1_pairs;
    rep.worst_step1 = std::max(rep.worst_step1, lower / kernel);
    if (lower > kernel * slack) ++rep.step1_violations;
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    const GroupPoint x = random_point(g, rng, 1.0);
    GroupPoint y = random_point(g, rng, 1.0);
    const double nx = norm(x);
    // |y| = 2|x| (1 + 4u) with u in [0, 1); u = 0 is the boundary case.
    const double u = i % 16 == 0 ? 0.0 : rng.uniform();
    y = g.dilate(2.0 * nx * (1.0 + 4.0 * u) / norm(y), y);
    const double ny = norm(y);
    const double dist = norm(g.mul(g.inv(y), x));
    ++rep.step2_pairs;
    rep.worst_step2 = std::max(rep.worst_step2, 0.5 * ny / dist);
    if (0.5 * ny > dist * slack) ++rep.step2_violations;
  }
  return rep;
}

}  // namespace revineq
