#include "revineq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "revineq/errors.hpp"

namespace revineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct Context {
  const QuasiNorm& norm;
  const QuadratureSpec& spec;
  double Q;
  IntegralResult S;
  double r_min;
  double r_max;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Context(const QuasiNorm& n, const QuadratureSpec& s)
      : norm(n),
        spec(s),
        Q(n.group().homogeneous_dimension()),
        S((s.validate(), sphere_measure(n, s))),
        r_min(s.r_min),
        r_max(s.r_max ? *s.r_max : kInf) {}

  LpValue lp(const RadialProfile& f, double p, double a = 0.0) const {
    return lp_functional(f, p, Q, S, r_min, r_max, a);
  }

  VerificationReport report(std::string name, Direction dir) const {
    VerificationReport rep;
    rep.inequality = std::move(name);
    rep.direction = dir;
    rep.params.Q = Q;
    rep.norm_name = norm.name();
    rep.group_name = norm.group().name();
    rep.sphere = S.value;
    rep.sphere_stderr = S.stderr_estimate;
    rep.samples = S.samples_used;
    return rep;
  }

  void finish(VerificationReport& rep) const {
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// Sampling range for shape checks on a profile.
std::pair<double, double> check_range(const RadialProfile& f, const Context& ctx) {
  const double lo = ctx.r_min > 0.0 ? ctx.r_min : f.scale() * 1e-6;
  double hi = std::min(ctx.r_max, f.scale() * 1e4);
  if (std::isfinite(f.support_radius())) hi = std::min(hi, f.support_radius() * (1.0 - 1e-9));
  return {lo, std::max(hi, lo * 2.0)};
}

void require_nonnegative(const RadialProfile& f, const Context& ctx, const char* origin) {
  const auto [lo, hi] = check_range(f, ctx);
  const double step = std::log(hi / lo) / 999.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = lo * std::exp(step * i);
    if (f.value(r) < 0.0)
      throw PreconditionError(origin, "profile " + f.family_tag() + " is negative at r = " + fmt(r));
  }
}

void require_decreasing(const RadialProfile& f, const Context& ctx, const char* origin) {
  require_nonnegative(f, ctx, origin);
  const auto [lo, hi] = check_range(f, ctx);
  if (const auto r = find_increase(f, lo, hi))
    throw PreconditionError(origin, "profile " + f.family_tag() +
                                        " is not radially decreasing (increases at r = " +
                                        fmt(*r) + ")");
}

void require_positive(const RadialProfile& f, const Context& ctx, const char* origin) {
  if (f.support_radius() < ctx.r_max)
    throw DegenerateInputError(origin, "profile " + f.family_tag() + " vanishes for |x| >= " +
                                           fmt(f.support_radius()) + "; f must be strictly positive");
  // Up to 100 scales: further out a positive profile may underflow.
  const auto [lo, far] = check_range(f, ctx);
  const double hi = std::max(std::min(far, f.scale() * 100.0), lo * 2.0);
  const double step = std::log(hi / lo) / 999.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = lo * std::exp(step * i);
    if (!(f.value(r) > 0.0))
      throw DegenerateInputError(origin, "profile " + f.family_tag() + " is not strictly positive at r = " + fmt(r));
  }
}

void require_nonzero(double v, const char* origin, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DegenerateInputError(origin, what + " is " + fmt(v) + "; the ratio is undefined");
}

// || f / |x|^{gamma/p} ||_p^p over || Rf / |x|^alpha ||_p || f / |x|^{beta/(p-1)} ||_p^{p-1}.
void fill_ckn(VerificationReport& rep, const Context& ctx, const RadialProfile& f, double p,
              double alpha, double beta, const char* origin) {
  const double gamma = alpha + beta + 1.0;
  const LpValue lhs = ctx.lp(f, p, -gamma / p);
  const LpValue f1 = ctx.lp(radial_derivative(f), p, -alpha);
  const LpValue f2 = ctx.lp(f, p, -beta / (p - 1.0));
  require_nonzero(f1.value, origin, "|| Rf / |x|^alpha ||_p");
  require_nonzero(f2.value, origin, "|| f / |x|^{beta/(p-1)} ||_p");
  rep.lhs = std::pow(lhs.value, p);
  rep.rhs = f1.value * std::pow(f2.value, p - 1.0);
  rep.ratio = rep.lhs / rep.rhs;
  // Both sides are homogeneous of degree one in |S|, so the ratio does not
  // depend on it.
  rep.ratio_stderr = 0.0;
  rep.params.p = p;
  rep.params.alpha = alpha;
  rep.params.beta = beta;
  rep.params.gamma_override = gamma;
  rep.extras = {{"gamma", gamma},
                {"norm_f_weighted_gamma", lhs.value},
                {"norm_Rf_weighted_alpha", f1.value},
                {"norm_f_weighted_beta", f2.value}};
  rep.profiles = {f.family_tag()};
}

}  // namespace

double VerificationReport::margin() const {
  return direction == Direction::reverse ? ratio - constant : constant - ratio;
}

double VerificationReport::combined_stderr() const {
  return std::hypot(ratio_stderr, constant_stderr);
}

std::string to_string(HardyVariant v) { return v == HardyVariant::ball ? "ball" : "complement"; }

HardyVariant parse_hardy_variant(const std::string& name) {
  if (name == "ball") return HardyVariant::ball;
  if (name == "complement") return HardyVariant::complement;
  throw ParameterError("inequalities::parse_hardy_variant", "unknown variant '" + name + "'");
}

std::pair<WeightSpec, WeightSpec> stein_weiss_hardy_weights(HardyVariant variant,
                                                            const InequalityParams& pr) {
  const double q = pr.q();
  if (variant == HardyVariant::ball)
    return {{(pr.alpha + pr.lambda) * q, WeightSpec::Role::outer},
            {-pr.beta * pr.p, WeightSpec::Role::inner}};
  return {{pr.alpha * q, WeightSpec::Role::outer},
          {-(pr.beta + pr.lambda) * pr.p, WeightSpec::Role::inner}};
}

VerificationReport verify_reverse_integral_hardy(HardyVariant variant, const WeightSpec& W,
                                                 const WeightSpec& U, const RadialProfile& f,
                                                 double p, double q, const QuasiNorm& norm,
                                                 const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_reverse_integral_hardy";
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  if (!(q < 0.0) || !std::isfinite(q)) throw ParameterError(origin, "q must be negative");
  if (!std::isfinite(W.exponent) || !std::isfinite(U.exponent))
    throw ParameterError(origin, "weight exponents must be finite");
  const Context ctx(norm, spec);
  require_positive(f, ctx, origin);
  const double Q = ctx.Q, S = ctx.S.value;
  const double pc = conjugate_exponent(p);
  const double a = W.exponent, b = U.exponent;
  const double c1 = Q + a;
  const double c2 = b * (1.0 - pc) + Q;
  const bool ball = variant == HardyVariant::ball;
  const std::string aname = ball ? "A1" : "A2";
  if (ball ? !(c1 < 0.0) : !(c1 > 0.0))
    throw ParameterError(origin, aname + " is infinite: Q + a = " + fmt(c1) +
                                     (ball ? " must be negative" : " must be positive"));
  if (ball ? !(c2 > 0.0) : !(c2 < 0.0))
    throw ParameterError(origin, aname + " is infinite: Q + b(1-p') = " + fmt(c2) +
                                     (ball ? " must be positive" : " must be negative"));
  const double power = c1 / q + c2 / pc;
  if (!(std::abs(power) <= kBalanceTol))
    throw ParameterError(origin, "condition " + aname + " > 0 failed: the infimum of |x|^" +
                                     fmt(power) + " over x != 0 is 0");
  const double A = std::pow(S / std::abs(c1), 1.0 / q) * std::pow(S / std::abs(c2), 1.0 / pc);
  const ConstantBracket br = constant_bracket(A, pc, q);
  const double e = 1.0 / q + 1.0 / pc;

  VerificationReport rep = ctx.report("reverse_integral_hardy_" + to_string(variant), Direction::reverse);
  rep.params.p = p;
  rep.params.q_prime = conjugate_exponent(q);
  rep.profiles = {f.family_tag()};
  rep.constant = br.lower;
  rep.constant_stderr = std::abs(e) * br.lower * ctx.S.stderr_estimate / S;
  rep.extras = {{aname, A}, {"kappa", br.kappa}, {"W_exponent", a}, {"U_exponent", b}};

  const LpValue rhs = ctx.lp(f, p, b / p);
  require_nonzero(rhs.value, origin, "(int f^p U)^{1/p}");
  rep.rhs = rhs.value;

  auto inner = [&](double r) {
    const double lo = ball ? ctx.r_min : std::max(r, ctx.r_min);
    const double hi = ball ? std::min(r, ctx.r_max) : ctx.r_max;
    if (!(hi > lo)) return 0.0;
    return S * integrate_radial(f, Q, lo, hi);
  };
  try {
    const double outer = integrate_radial(
        [&](double r) {
          const double F = inner(r);
          if (!(F > 0.0))
            throw DivergenceError(origin, "inner integral vanishes at r = " + fmt(r) +
                                              " and 0^q = +inf");
          return std::pow(F, q) * std::pow(r, a);
        },
        Q, ctx.r_min, ctx.r_max, f.scale());
    rep.lhs = std::pow(S * outer, 1.0 / q);
  } catch (const DivergenceError& err) {
    rep.lhs = 0.0;
    rep.notes.push_back(std::string("outer integral is +inf (") + err.what() +
                        "); LHS = (+inf)^{1/q} = 0 by the negative-exponent convention");
  }
  rep.ratio = rep.lhs / rep.rhs;
  rep.ratio_stderr = std::abs(e) * rep.ratio * ctx.S.stderr_estimate / S;
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_stein_weiss(const RadialProfile& f, const RadialProfile& h,
                                      const InequalityParams& params, const QuasiNorm& norm,
                                      const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_stein_weiss";
  const auto adm = validate_params(params);
  if (!adm.admissible()) {
    std::string msg;
    for (const auto& s : adm.failures()) msg += (msg.empty() ? "" : "; ") + s;
    throw ParameterError(origin, msg);
  }
  const Context ctx(norm, spec);
  if (std::abs(params.Q - ctx.Q) > 1e-12)
    throw ParameterError(origin, "params Q = " + fmt(params.Q) + " does not match the group's Q = " + fmt(ctx.Q));
  require_nonnegative(f, ctx, origin);
  require_nonnegative(h, ctx, origin);

  VerificationReport rep = ctx.report("stein_weiss", Direction::reverse);
  rep.params = params;
  rep.profiles = {f.family_tag(), h.family_tag()};
  rep.notes = adm.unverified();

  const LpValue nf = ctx.lp(f, params.q_prime);
  const LpValue nh = ctx.lp(h, params.p);
  require_nonzero(nf.value, origin, "||f||_{q'}");
  require_nonzero(nh.value, origin, "||h||_p");
  const IntegralResult B = stein_weiss_form(f, h, params.alpha, params.beta, params.lambda, norm, spec);
  rep.lhs = B.value;
  rep.rhs = nf.value * nh.value;
  rep.ratio = rep.lhs / rep.rhs;
  rep.samples = B.samples_used;
  const double rel_S = ctx.S.stderr_estimate / ctx.S.value;
  const double norm_power = 1.0 / params.q_prime + 1.0 / params.p;
  rep.ratio_stderr = rep.ratio * std::hypot(B.value != 0.0 ? B.stderr_estimate / B.value : 0.0,
                                            norm_power * rel_S);
  rep.constant = stein_weiss_lower_constant(params, ctx.S.value);
  rep.constant_stderr = std::abs(sphere_exponent(params)) * rep.constant * rel_S;

  const double kappa = bracket_kappa(params.p_conj(), params.q());
  rep.extras = {{"B", B.value}, {"B_stderr", B.stderr_estimate}, {"norm_f_q_prime", nf.value},
                {"norm_h_p", nh.value}, {"kappa", kappa}};
  if (params.variant != Variant::improved_a)
    rep.extras.emplace_back("A1", analytic_A1(params, ctx.S.value));
  if (params.variant != Variant::improved_b)
    rep.extras.emplace_back("A2", analytic_A2(params, ctx.S.value));
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_reverse_hls(const RadialProfile& f, const RadialProfile& h,
                                      const InequalityParams& params, const QuasiNorm& norm,
                                      const QuadratureSpec& spec) {
  if (params.alpha != 0.0 || params.beta != 0.0)
    throw ParameterError("inequalities::verify_reverse_hls", "alpha and beta must be 0");
  VerificationReport rep = verify_stein_weiss(f, h, params, norm, spec);
  rep.inequality = "reverse_hls";
  return rep;
}

VerificationReport verify_reverse_hardy(const RadialProfile& f, double p, const QuasiNorm& norm,
                                        const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_reverse_hardy";
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  const Context ctx(norm, spec);
  if (!(ctx.Q > p)) throw ParameterError(origin, "need Q > p");
  require_decreasing(f, ctx, origin);
  VerificationReport rep = ctx.report("reverse_hardy", Direction::reverse);
  const LpValue num = ctx.lp(f, p, -1.0);
  const LpValue den = ctx.lp(radial_derivative(f), p);
  require_nonzero(den.value, origin, "||Rf||_p");
  rep.params.p = p;
  rep.profiles = {f.family_tag()};
  rep.lhs = num.value;
  rep.rhs = den.value;
  rep.ratio = rep.lhs / rep.rhs;
  rep.constant = p / (ctx.Q - p);
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_reverse_sobolev(const RadialProfile& f, double p, const QuasiNorm& norm,
                                          const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_reverse_sobolev";
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  const Context ctx(norm, spec);
  require_decreasing(f, ctx, origin);
  VerificationReport rep = ctx.report("reverse_sobolev", Direction::reverse);
  const LpValue num = ctx.lp(f, p);
  const LpValue den = ctx.lp(radial_derivative(f), p, 1.0);
  require_nonzero(den.value, origin, "||Ef||_p");
  rep.params.p = p;
  rep.profiles = {f.family_tag()};
  rep.lhs = num.value;
  rep.rhs = den.value;
  rep.ratio = rep.lhs / rep.rhs;
  rep.constant = p / ctx.Q;
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_reverse_ckn(const RadialProfile& f, double p, double alpha, double beta,
                                      const QuasiNorm& norm, const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_reverse_ckn";
  if (!(p > 0.0 && p < 1.0)) throw ParameterError(origin, "p must lie in (0, 1)");
  const Context ctx(norm, spec);
  const double gamma = alpha + beta + 1.0;
  if (!(gamma < ctx.Q))
    throw ParameterError(origin, "gamma = alpha + beta + 1 = " + fmt(gamma) + " must be < Q");
  require_decreasing(f, ctx, origin);
  VerificationReport rep = ctx.report("reverse_ckn", Direction::reverse);
  fill_ckn(rep, ctx, f, p, alpha, beta, origin);
  rep.constant = p / (ctx.Q - gamma);
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_forward_hardy(const RadialProfile& f, double p, const QuasiNorm& norm,
                                        const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_forward_hardy";
  const Context ctx(norm, spec);
  if (!(p > 1.0 && p < ctx.Q)) throw ParameterError(origin, "p must lie in (1, Q)");
  VerificationReport rep = ctx.report("forward_hardy", Direction::forward);
  const LpValue num = ctx.lp(f, p, -1.0);
  const LpValue den = ctx.lp(radial_derivative(f), p);
  require_nonzero(den.value, origin, "||Rf||_p");
  rep.params.p = p;
  rep.profiles = {f.family_tag()};
  rep.lhs = num.value;
  rep.rhs = den.value;
  rep.ratio = rep.lhs / rep.rhs;
  rep.constant = p / (ctx.Q - p);
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_forward_sobolev(const RadialProfile& f, double p, const QuasiNorm& norm,
                                          const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_forward_sobolev";
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError(origin, "p must lie in (1, inf)");
  const Context ctx(norm, spec);
  VerificationReport rep = ctx.report("forward_sobolev", Direction::forward);
  const LpValue num = ctx.lp(f, p);
  const LpValue den = ctx.lp(radial_derivative(f), p, 1.0);
  require_nonzero(den.value, origin, "||Ef||_p");
  rep.params.p = p;
  rep.profiles = {f.family_tag()};
  rep.lhs = num.value;
  rep.rhs = den.value;
  rep.ratio = rep.lhs / rep.rhs;
  rep.constant = p / ctx.Q;
  ctx.finish(rep);
  return rep;
}

VerificationReport verify_forward_ckn(const RadialProfile& f, double p, double alpha, double beta,
                                      const QuasiNorm& norm, const QuadratureSpec& spec) {
  const char* origin = "inequalities::verify_forward_ckn";
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError(origin, "p must lie in (1, inf)");
  const Context ctx(norm, spec);
  const double gamma = alpha + beta + 1.0;
  if (gamma == ctx.Q) throw ParameterError(origin, "gamma = Q gives a zero constant");
  VerificationReport rep = ctx.report("forward_ckn", Direction::forward);
  fill_ckn(rep, ctx, f, p, alpha, beta, origin);
  rep.constant = p / std::abs(ctx.Q - gamma);
  ctx.finish(rep);
  return rep;
}

double stein_weiss_dilation_drift(const RadialProfile& f, const RadialProfile& h,
                                  const InequalityParams& params, const QuasiNorm& norm,
                                  const QuadratureSpec& spec, const std::vector<double>& scales) {
  const double base = verify_stein_weiss(f, h, params, norm, spec).ratio;
  double drift = 0.0;
  for (double s : scales) {
    if (s == 1.0) continue;
    const double r = verify_stein_weiss(f.dilated(s), h.dilated(s), params, norm, spec).ratio;
    drift = std::max(drift, std::abs(r / base - 1.0));
  }
  return drift;
}

const std::vector<std::string>& inequality_names() {
  static const std::vector<std::string> names{
      "reverse_integral_hardy", "stein_weiss",     "reverse_hls",
      "reverse_hardy",          "reverse_sobolev", "reverse_ckn",
      "forward_hardy",          "forward_sobolev", "forward_ckn"};
  return names;
}

}  // namespace revineq
