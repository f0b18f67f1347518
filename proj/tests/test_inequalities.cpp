#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "revineq/errors.hpp"
#include "revineq/trials.hpp"
#include "revineq/verify.hpp"

using namespace revineq;

namespace {

QuadratureSpec mc(std::size_t n, std::uint64_t seed = 1) {
  QuadratureSpec s;
  s.sample_count = n;
  s.seed = seed;
  return s;
}

RadialProfile exp_profile(double c) {
  RadialProfile f([c](double r) { return std::exp(-c * r); },
                  [c](double r) { return -c * std::exp(-c * r); }, "exp_decay", {c});
  f.with_scale(1.0 / c).with_decreasing(true);
  return f;
}

InequalityParams worked() {
  InequalityParams pr;
  pr.Q = 4.0;
  pr.p = 0.5;
  pr.q_prime = 0.5;
  pr.alpha = 1.0;
  pr.beta = 2.0;
  pr.lambda = 5.0;
  return pr;
}

bool has_failure(const AdmissibilityReport& rep, const std::string& name) {
  for (const auto& f : rep.failures())
    if (f.find(name) != std::string::npos) return true;
  return false;
}

const QuasiNorm& koranyi() {
  static const QuasiNorm k = QuasiNorm::koranyi(HomogeneousGroup::heisenberg(1));
  return k;
}

}  // namespace

TEST_CASE("conjugate exponent") {
  CHECK(conjugate_exponent(0.5) == -1.0);
  CHECK(conjugate_exponent(2.0) == 2.0);
  CHECK(conjugate_exponent(2.0 / 3.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK_THROWS_AS(conjugate_exponent(1.0), ParameterError);
  for (double p : {0.01, 0.3, 0.5, 0.77, 1.5, 3.0, 40.0, -2.0}) {
    CAPTURE(p);
    CHECK(std::abs(conjugate_exponent(conjugate_exponent(p)) - p) <= 1e-15 * std::abs(p) * 4);
  }
}

TEST_CASE("validate_params worked examples") {
  auto pr = worked();
  const auto ok = validate_params(pr);
  CHECK(ok.admissible());
  CHECK(ok.failures().empty());
  CHECK(ok.reason().empty());

  pr.alpha = -0.1;
  pr.lambda = balance_lambda(4.0, 0.5, 0.5, -0.1, 2.0);
  const auto neg = validate_params(pr);
  CHECK_FALSE(neg.admissible());
  CHECK(has_failure(neg, "0 <= alpha"));

  pr = worked();
  pr.lambda = 4.0;
  const auto bal = validate_params(pr);
  CHECK_FALSE(bal.admissible());
  CHECK(has_failure(bal, "balance"));

  CHECK(balance_lambda(4.0, 0.5, 0.5, 1.0, 2.0) == 5.0);
}

TEST_CASE("improved variants relax one sign condition") {
  auto pr = worked();
  pr.beta = -0.5;
  pr.lambda = balance_lambda(pr.Q, pr.p, pr.q_prime, pr.alpha, pr.beta);
  CHECK_FALSE(validate_params(pr).admissible());
  pr.variant = Variant::improved_a;
  const auto rep = validate_params(pr);
  CHECK(rep.admissible());
  CHECK_FALSE(rep.unverified().empty());
  pr.variant = Variant::improved_b;
  CHECK_FALSE(validate_params(pr).admissible());
}

TEST_CASE("analytic constants for the worked parameters") {
  const auto pr = worked();
  for (double S : {1.0, 2.0 * oracle::koranyi_sphere(), oracle::koranyi_sphere()}) {
    CAPTURE(S);
    CHECK(analytic_A1(pr, S) == doctest::Approx(4.0 / (S * S)).epsilon(1e-14));
    CHECK(analytic_A2(pr, S) == doctest::Approx(9.0 / (S * S)).epsilon(1e-14));
    CHECK(stein_weiss_lower_constant(pr, S) ==
          doctest::Approx(13.0 / (256.0 * S * S)).epsilon(1e-14));
  }
  CHECK(sphere_exponent(pr) == -2.0);
  CHECK_THROWS_AS(analytic_A1(pr, 0.0), ParameterError);
}

TEST_CASE("kappa and constant brackets") {
  CHECK(bracket_kappa(-1.0, -1.0) == doctest::Approx(0.25).epsilon(1e-15));
  const auto b = constant_bracket(1.0, -1.0, -1.0);
  CHECK(b.lower == doctest::Approx(0.25));
  CHECK(b.upper == 1.0);
  CHECK(b.A == 1.0);
  CHECK_THROWS_AS(constant_bracket(1.0, 1.0, -1.0), ParameterError);
  CHECK_THROWS_AS(constant_bracket(1.0, -1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(constant_bracket(0.0, -1.0, -1.0), ParameterError);

  for (int i = 1; i <= 60; ++i)
    for (int j = 1; j <= 60; ++j) {
      const double pc = -std::pow(10.0, -1.0 + 4.0 * i / 60.0);
      const double q = -std::pow(10.0, -1.0 + 4.0 * j / 60.0);
      const double k = bracket_kappa(pc, q);
      CAPTURE(pc);
      CAPTURE(q);
      CHECK(k == doctest::Approx(oracle::kappa(pc, q)).epsilon(1e-12));
      CHECK(k > 0.0);
      CHECK(k <= 1.0 + 1e-15);
    }
}

TEST_CASE("constants are positive on the admissible grid") {
  std::size_t admissible = 0;
  for (double Q : {1.0, 2.0, 4.0})
    for (double p : {0.3, 0.5, 0.7})
      for (double qp : {0.3, 0.5, 0.7})
        for (int ia = 0; ia < 5; ++ia)
          for (int ib = 0; ib < 5; ++ib) {
            InequalityParams pr;
            pr.Q = Q;
            pr.p = p;
            pr.q_prime = qp;
            // alpha, beta on [0, -Q/q) and [0, -Q/p') sub-grids.
            pr.alpha = -Q / pr.q() * ia / 5.0;
            pr.beta = -Q / pr.p_conj() * ib / 5.0;
            pr.lambda = balance_lambda(Q, p, qp, pr.alpha, pr.beta);
            if (!validate_params(pr).admissible()) continue;
            ++admissible;
            const double S = 2.0;
            CHECK(analytic_A1(pr, S) > 0.0);
            CHECK(analytic_A2(pr, S) > 0.0);
            const double L = stein_weiss_lower_constant(pr, S);
            CHECK(L > 0.0);
            // 2^{-lambda-1} factor: L decreases in lambda at fixed A's.
            const double A_sum = analytic_A1(pr, S) + analytic_A2(pr, S);
            CHECK(L == doctest::Approx(std::pow(2.0, -pr.lambda - 1.0) *
                                       oracle::kappa(pr.p_conj(), pr.q()) * A_sum)
                           .epsilon(1e-12));
          }
  CHECK(admissible > 100);
}

TEST_CASE("reverse Hardy against the Gamma oracle") {
  const auto r = verify_reverse_hardy(exp_profile(1.0), 0.5, koranyi(), mc(20000));
  CHECK(r.ratio == doctest::Approx(oracle::hardy_ratio(4.0, 0.5)).epsilon(1e-8));
  CHECK(r.ratio == doctest::Approx(0.15340).epsilon(1e-4));
  CHECK(r.constant == doctest::Approx(1.0 / 7.0));
  CHECK(r.pass());
  CHECK(r.margin() > 0.0);

  const auto scaled = verify_reverse_hardy(exp_profile(1.0).scaled(7.5), 0.5, koranyi(), mc(20000));
  CHECK(scaled.ratio == doctest::Approx(r.ratio).epsilon(1e-10));

  RadialProfile bump([](double r) { return r * std::exp(-r); });
  CHECK_THROWS_AS(verify_reverse_hardy(bump, 0.5, koranyi(), mc(1000)), PreconditionError);
  CHECK_THROWS_AS(verify_reverse_hardy(exp_profile(1.0), 1.5, koranyi(), mc(1000)),
                  ParameterError);
}

TEST_CASE("reverse Sobolev against the Gamma oracle") {
  const auto r = verify_reverse_sobolev(exp_profile(1.0), 0.5, koranyi(), mc(20000));
  CHECK(r.ratio == doctest::Approx(oracle::sobolev_ratio(4.0, 0.5)).epsilon(1e-8));
  CHECK(r.ratio == doctest::Approx(0.13304).epsilon(1e-4));
  CHECK(r.constant == 0.125);
  CHECK(r.pass());
  const auto scaled = verify_reverse_sobolev(exp_profile(1.0).scaled(0.01), 0.5, koranyi(), mc(20000));
  CHECK(scaled.ratio == doctest::Approx(r.ratio).epsilon(1e-10));
  CHECK_THROWS_AS(verify_reverse_sobolev(radial_indicator(1.0), 0.5, koranyi(), mc(1000)),
                  DegenerateInputError);
}

TEST_CASE("reverse CKN and its reductions") {
  const auto s = mc(20000);
  const auto r = verify_reverse_ckn(exp_profile(1.0), 0.5, 1.0, 1.0, koranyi(), s);
  CHECK(r.ratio == doctest::Approx(oracle::ckn_ratio(4.0, 0.5, 1.0, 1.0)).epsilon(1e-8));
  CHECK(r.constant == doctest::Approx(0.5));
  CHECK(r.pass());

  // gamma = p, alpha = 0 gives reverse Hardy; gamma = 0, beta = 0 gives Sobolev.
  const auto hardy = verify_reverse_hardy(exp_profile(1.0), 0.5, koranyi(), s);
  const auto ckn_h = verify_reverse_ckn(exp_profile(1.0), 0.5, 0.0, -0.5, koranyi(), s);
  CHECK(std::abs(ckn_h.ratio - hardy.ratio) <=
        3.0 * std::hypot(ckn_h.ratio_stderr, hardy.ratio_stderr) + 1e-9);
  CHECK(ckn_h.constant == doctest::Approx(hardy.constant));
  const auto sob = verify_reverse_sobolev(exp_profile(1.0), 0.5, koranyi(), s);
  const auto ckn_s = verify_reverse_ckn(exp_profile(1.0), 0.5, -1.0, 0.0, koranyi(), s);
  CHECK(std::abs(ckn_s.ratio - sob.ratio) <=
        3.0 * std::hypot(ckn_s.ratio_stderr, sob.ratio_stderr) + 1e-9);
  CHECK(ckn_s.constant == doctest::Approx(sob.constant));

  CHECK_THROWS_AS(verify_reverse_ckn(exp_profile(1.0), 0.5, 2.0, 1.0, koranyi(), s),
                  ParameterError);
}

TEST_CASE("forward verifiers") {
  const auto r4 = QuasiNorm::euclidean(HomogeneousGroup::abelian(4));
  const auto s = mc(20000);
  const auto bump = make_profile(TrialFamily::smooth_bump(), {2.0});
  const auto h = verify_forward_hardy(bump, 2.0, r4, s);
  CHECK(h.direction == Direction::forward);
  CHECK(h.constant == 1.0);
  CHECK(h.pass());
  CHECK(h.margin() == doctest::Approx(h.constant - h.ratio));

  // Along (1 + r)^{-s}, s -> 1, the Hardy ratio tends to the sharp constant.
  const auto power = TrialFamily::power_decay(1.001, 40.0);
  double prev = 0.0;
  for (double sv : {1.5, 1.1, 1.01}) {
    CAPTURE(sv);
    const auto r = verify_forward_hardy(make_profile(power, {sv}), 2.0, r4, s);
    CHECK(r.ratio == doctest::Approx(oracle::forward_hardy_power(sv)).epsilon(1e-6));
    CHECK(r.ratio > prev);
    CHECK(r.pass());
    prev = r.ratio;
  }
  CHECK(prev > 0.99);

  const auto sob = verify_forward_sobolev(bump, 2.0, r4, s);
  CHECK(sob.constant == 0.5);
  CHECK(sob.pass());

  const double p = 2.0;
  const auto ckn = verify_forward_ckn(bump, p, 0.0, p - 1.0, r4, s);
  CHECK(ckn.ratio == doctest::Approx(h.ratio).epsilon(1e-10));
  CHECK(ckn.constant == doctest::Approx(h.constant));
  CHECK(ckn.pass());

  CHECK_THROWS_AS(verify_forward_hardy(bump, 4.0, r4, s), ParameterError);
  CHECK_THROWS_AS(verify_forward_hardy(bump, 0.5, r4, s), ParameterError);
  CHECK_THROWS_AS(verify_forward_sobolev(bump, 1.0, r4, s), ParameterError);
  CHECK_THROWS_AS(verify_forward_ckn(bump, 2.0, 2.0, 1.0, r4, s), ParameterError);
}

TEST_CASE("reverse Stein-Weiss on the worked parameters") {
  const auto s = mc(4000);
  const auto r = verify_stein_weiss(exp_profile(1.0), exp_profile(1.0), worked(), koranyi(), s);
  CHECK(r.pass());
  CHECK(r.ratio > r.constant);
  CHECK(r.constant ==
        doctest::Approx(13.0 / (256.0 * r.sphere * r.sphere)).epsilon(1e-12));

  const auto scaled =
      verify_stein_weiss(exp_profile(1.0).scaled(3.0), exp_profile(1.0).scaled(0.2), worked(),
                         koranyi(), s);
  CHECK(scaled.ratio == doctest::Approx(r.ratio).epsilon(1e-10));

  auto bad = worked();
  bad.lambda = 4.0;
  CHECK_THROWS_AS(verify_stein_weiss(exp_profile(1.0), exp_profile(1.0), bad, koranyi(), s),
                  ParameterError);
  auto wrong_q = worked();
  wrong_q.Q = 3.0;
  CHECK_THROWS_AS(verify_stein_weiss(exp_profile(1.0), exp_profile(1.0), wrong_q, koranyi(), s),
                  ParameterError);
}

TEST_CASE("reverse HLS") {
  const auto s = mc(4000);
  InequalityParams pr = worked();
  pr.alpha = 0.0;
  pr.beta = 0.0;
  pr.lambda = 8.0;
  const auto f = exp_profile(1.0);
  const auto h = exp_profile(2.0);
  const auto hls = verify_reverse_hls(f, h, pr, koranyi(), s);
  CHECK(hls.pass());
  const auto sw = verify_stein_weiss(f, h, pr, koranyi(), s);
  CHECK(hls.ratio == sw.ratio);
  CHECK(hls.constant == sw.constant);

  CHECK_THROWS_AS(verify_reverse_hls(f, h, worked(), koranyi(), s), ParameterError);
  RadialProfile zero([](double) { return 0.0; }, {}, "zero");
  CHECK_THROWS_AS(verify_reverse_hls(f, zero, pr, koranyi(), s), DegenerateInputError);
}

TEST_CASE("Stein-Weiss ratio is stable under dilation") {
  const double drift = stein_weiss_dilation_drift(exp_profile(1.0), exp_profile(1.0), worked(),
                                                  koranyi(), mc(4000), {0.5, 1.0, 2.0, 4.0});
  CHECK(drift <= 1e-2);
}

TEST_CASE("integral Hardy parameter errors") {
  const auto pr = worked();
  const auto [W, U] = stein_weiss_hardy_weights(HardyVariant::ball, pr);
  CHECK(W.exponent == doctest::Approx((pr.alpha + pr.lambda) * pr.q()));
  CHECK(U.exponent == doctest::Approx(-pr.beta * pr.p));
  const auto [Wc, Uc] = stein_weiss_hardy_weights(HardyVariant::complement, pr);
  CHECK(Wc.exponent == doctest::Approx(pr.alpha * pr.q()));
  CHECK(Uc.exponent == doctest::Approx(-(pr.beta + pr.lambda) * pr.p));

  const auto s = mc(1000);
  CHECK_THROWS_AS(verify_reverse_integral_hardy(HardyVariant::ball, W, U, exp_profile(1.0), 0.5,
                                                0.5, koranyi(), s),
                  ParameterError);
  CHECK_THROWS_AS(verify_reverse_integral_hardy(HardyVariant::ball, W, U, exp_profile(1.0), 0.5,
                                                0.0, koranyi(), s),
                  ParameterError);
  CHECK_THROWS_AS(verify_reverse_integral_hardy(HardyVariant::ball, W, U, exp_profile(1.0), 1.5,
                                                -1.0, koranyi(), s),
                  ParameterError);
  CHECK(parse_hardy_variant("complement") == HardyVariant::complement);
  CHECK_THROWS_AS(parse_hardy_variant("annulus"), ParameterError);
}

TEST_CASE("integral Hardy reports a vanishing left side") {
  // The outer integral diverges with the proof's weights, so LHS = 0.
  const auto pr = worked();
  const auto s = mc(4000);
  for (auto v : {HardyVariant::ball, HardyVariant::complement}) {
    CAPTURE(to_string(v));
    const auto [W, U] = stein_weiss_hardy_weights(v, pr);
    const auto r = verify_reverse_integral_hardy(v, W, U, exp_profile(1.0), pr.p, pr.q(),
                                                 koranyi(), s);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs > 0.0);
    CHECK_FALSE(r.notes.empty());
    const double A = v == HardyVariant::ball ? analytic_A1(pr, r.sphere) : analytic_A2(pr, r.sphere);
    CHECK(r.constant == doctest::Approx(bracket_kappa(pr.p_conj(), pr.q()) * A).epsilon(1e-12));
  }
}

TEST_CASE("integral Hardy holds with the proof's weights" * doctest::may_fail()) {
  // Expected to fail: the outer integral diverges, so LHS = 0 < RHS.
  const auto pr = worked();
  const auto s = mc(4000);
  for (auto v : {HardyVariant::ball, HardyVariant::complement}) {
    const auto [W, U] = stein_weiss_hardy_weights(v, pr);
    CHECK(verify_reverse_integral_hardy(v, W, U, exp_profile(1.0), pr.p, pr.q(), koranyi(), s)
              .pass());
  }
}

TEST_CASE("verifier names") {
  const auto& names = inequality_names();
  CHECK(names.size() == 9);
  CHECK(std::find(names.begin(), names.end(), "reverse_ckn") != names.end());
}
