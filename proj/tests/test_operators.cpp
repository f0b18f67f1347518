#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "revineq/errors.hpp"
#include "revineq/operators.hpp"

using namespace revineq;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

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

// Midpoint rule for int_{-1}^{1} int_{-1}^{1} |x - y|^lambda dx dy.
double brute_interval_form(double lambda, int n) {
  const double h = 2.0 / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -1.0 + (i + 0.5) * h, y = -1.0 + (j + 0.5) * h;
      sum += std::pow(std::abs(x - y), lambda);
    }
  return sum * h * h;
}

}  // namespace

TEST_CASE("lp functional against closed forms") {
  const IntegralResult S{3.0, 0.01, 0};
  // (S int e^{-r/2} r^3 dr)^2 = (S * 96)^2
  const auto v = lp_functional(exp_profile(1.0), 0.5, 4.0, S, 0.0, kInf);
  CHECK(v.value == doctest::Approx(std::pow(96.0 * 3.0, 2.0)).epsilon(1e-10));
  CHECK(v.radial == doctest::Approx(96.0).epsilon(1e-10));
  // |S|^{1/p} carries relative error stderr/(p S).
  CHECK(v.stderr_estimate == doctest::Approx(v.value * 0.01 / (0.5 * 3.0)).epsilon(1e-9));

  for (double p : {0.3, 0.7, 2.0}) {
    for (double a : {-0.5, 0.0, 1.0}) {
      CAPTURE(p);
      CAPTURE(a);
      const auto w = lp_functional(exp_profile(1.0), p, 4.0, S, 0.0, kInf, a);
      CHECK(w.value == doctest::Approx(oracle::lp_exp(p, a, 4.0, 3.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("lp functional on R^1 and R^2") {
  const auto s = mc(20000);
  const auto r1 = QuasiNorm::euclidean(HomogeneousGroup::abelian(1));
  QuadratureSpec s1 = s;
  s1.r_max = 1.0;
  const auto a = lp_functional(radial_indicator(1.0), 1.0, r1, s1);
  CHECK(std::abs(a.value - 2.0) <= 3.0 * a.stderr_estimate + 1e-9);

  const auto r2 = QuasiNorm::euclidean(HomogeneousGroup::abelian(2));
  const auto b = lp_functional(exp_profile(1.0), 1.0, r2, s);
  CHECK(b.stderr_estimate > 0.0);
  CHECK(std::abs(b.value - 2.0 * kPi) <= 3.0 * b.stderr_estimate);
}

TEST_CASE("lp functional scales under dilation") {
  const IntegralResult S{2.0 * kPi, 0.0, 0};
  const auto f = exp_profile(1.3);
  for (double p : {0.3, 0.5, 3.0})
    for (double s : {0.25, 2.0, 7.0}) {
      CAPTURE(p);
      CAPTURE(s);
      const double base = lp_functional(f, p, 4.0, S, 0.0, kInf).value;
      const double dil = lp_functional(f.dilated(s), p, 4.0, S, 0.0, kInf).value;
      CHECK(dil == doctest::Approx(std::pow(s, -4.0 / p) * base).epsilon(1e-9));
    }
}

TEST_CASE("negative exponents on a compact support are degenerate") {
  const IntegralResult S{2.0, 0.0, 0};
  CHECK_THROWS_AS(lp_functional(radial_indicator(1.0), -0.5, 1.0, S, 0.0, kInf),
                  DegenerateInputError);
}

TEST_CASE("radial derivative and Euler operator") {
  const auto f = exp_profile(2.0);
  const auto d = radial_derivative(f);
  const auto e = euler_apply(f);
  for (double r : {0.1, 1.0, 3.0}) {
    CHECK(d(r) == doctest::Approx(-2.0 * std::exp(-2.0 * r)));
    CHECK(e(r) == doctest::Approx(-2.0 * r * std::exp(-2.0 * r)));
  }
  // Without an analytic derivative the central difference is used.
  RadialProfile p([](double r) { return std::pow(1.0 + r, -3.0); });
  CHECK_FALSE(p.has_analytic_derivative());
  for (double r : {0.01, 0.5, 10.0})
    CHECK(p.derivative(r) == doctest::Approx(-3.0 * std::pow(1.0 + r, -4.0)).epsilon(1e-6));
  RadialProfile id([](double r) { return r; });
  CHECK(euler_apply(id)(2.5) == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("Riesz potential far from the support of an indicator") {
  const auto r1 = QuasiNorm::euclidean(HomogeneousGroup::abelian(1));
  // int_{-1}^{1} |10 - y| dy = 20.
  const auto v = riesz_potential(r1, radial_indicator(1.0), 1.0, GroupPoint{10.0}, mc(1000));
  CHECK(v.value >= 18.0);
  CHECK(v.value <= 22.0);
  CHECK(v.value == doctest::Approx(20.0).epsilon(1e-8));
  // int_{-1}^{1} |y|^2 dy = 2/3 at the origin.
  const auto o = riesz_potential(r1, radial_indicator(1.0), 2.0, GroupPoint{0.0}, mc(1000));
  CHECK(o.value == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("Riesz potential at the origin equals |S| / (lambda + Q)") {
  const auto k = QuasiNorm::koranyi(HomogeneousGroup::heisenberg(1));
  const double lambda = 1.0;
  const auto v = riesz_potential(k, radial_indicator(1.0), lambda, GroupPoint{0.0, 0.0, 0.0},
                                 mc(20000));
  const double want = oracle::koranyi_sphere() / (lambda + 4.0);
  CHECK(v.stderr_estimate > 0.0);
  CHECK(std::abs(v.value - want) <= 3.0 * v.stderr_estimate);
}

TEST_CASE("Stein-Weiss form on R^1 with indicators") {
  const auto r1 = QuasiNorm::euclidean(HomogeneousGroup::abelian(1));
  const auto u = radial_indicator(1.0);
  const auto b = stein_weiss_form(u, u, 0.0, 0.0, 1.0, r1, mc(100));
  const double brute = brute_interval_form(1.0, 1000);
  CHECK(brute == doctest::Approx(8.0 / 3.0).epsilon(1e-5));
  CHECK(b.value == doctest::Approx(8.0 / 3.0).epsilon(1e-3));

  const auto b2 = stein_weiss_form(u, u, 0.0, 0.0, 2.0, r1, mc(100));
  // int int (x - y)^2 = 8/3 over [-1, 1]^2.
  CHECK(b2.value == doctest::Approx(8.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("Stein-Weiss form scales under dilation") {
  const auto k = QuasiNorm::koranyi(HomogeneousGroup::heisenberg(1));
  const auto f = exp_profile(1.0);
  const auto h = exp_profile(2.0);
  const double alpha = 1.0, beta = 2.0, lambda = 5.0, Q = 4.0;
  const auto s = mc(2000, 3);
  const auto base = stein_weiss_form(f, h, alpha, beta, lambda, k, s);
  for (double t : {0.5, 2.0}) {
    CAPTURE(t);
    const auto d = stein_weiss_form(f.dilated(t), h.dilated(t), alpha, beta, lambda, k, s);
    const double want = std::pow(t, -(2.0 * Q + alpha + beta + lambda)) * base.value;
    CHECK(d.value == doctest::Approx(want).epsilon(1e-2));
  }
}

TEST_CASE("Stein-Weiss form of the zero function vanishes") {
  const auto r1 = QuasiNorm::euclidean(HomogeneousGroup::abelian(1));
  RadialProfile zero([](double) { return 0.0; });
  CHECK(stein_weiss_form(zero, exp_profile(1.0), 0.0, 0.0, 1.0, r1, mc(100)).value == 0.0);
}

TEST_CASE("discrete reverse Holder holds on random instances") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 12);
  std::size_t checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = len(gen);
    const double p = 0.02 + 0.96 * unif(gen);
    std::vector<double> f(n), g(n), mu(n);
    for (int i = 0; i < n; ++i) {
      f[i] = std::exp(6.0 * (unif(gen) - 0.5));
      g[i] = std::exp(6.0 * (unif(gen) - 0.5));
      mu[i] = 0.1 + unif(gen);
    }
    const auto r = reverse_holder_gap(f, g, p, mu);
    if (r.gap < -1e-10 * r.rhs) {
      CAPTURE(trial);
      CAPTURE(p);
      CHECK(r.gap >= -1e-10 * r.rhs);
    }
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("discrete reverse Holder equality and zero cases") {
  const double p = 0.4;
  const std::vector<double> f{0.5, 2.0, 3.0, 1.25};
  std::vector<double> g(f.size());
  // Equality when g^{p'} is proportional to f^p.
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::pow(f[i], p - 1.0);
  const auto eq = reverse_holder_gap(f, g, p);
  CHECK(std::abs(eq.gap) <= 1e-12 * eq.rhs);

  const std::vector<double> zero(4, 0.0);
  const auto z = reverse_holder_gap(zero, g, p);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);

  CHECK_THROWS_AS(reverse_holder_gap(f, zero, p), DegenerateInputError);
  CHECK_THROWS_AS(reverse_holder_gap(f, g, 1.5), ParameterError);
  CHECK_THROWS_AS(reverse_holder_gap(f, std::vector<double>{1.0}, p), ShapeError);
}

TEST_CASE("reverse Holder for profiles") {
  const auto k = QuasiNorm::koranyi(HomogeneousGroup::heisenberg(1));
  auto s = mc(4000);
  s.r_max = 20.0;
  const auto r = reverse_holder_gap(exp_profile(1.0), exp_profile(0.5), 0.5, k, s);
  CHECK(r.gap > 0.0);
  CHECK(r.lhs > r.rhs);
}

TEST_CASE("kernel bounds hold for true norms") {
  for (const auto& n : {QuasiNorm::euclidean(HomogeneousGroup::abelian(3)),
                        QuasiNorm::cygan(HomogeneousGroup::heisenberg(1))}) {
    CAPTURE(n.name());
    for (double lambda : {0.5, 2.0, 6.0}) {
      const auto rep = check_kernel_bounds(n, lambda, 5000, 7);
      CHECK(rep.step1_pairs == 5000);
      CHECK(rep.step2_pairs == 5000);
      CHECK(rep.passed());
      CHECK(rep.worst_step1 <= 1.0 + 1e-12);
      CHECK(rep.worst_step2 <= 1.0 + 1e-12);
    }
  }
  CHECK_THROWS_AS(check_kernel_bounds(QuasiNorm::koranyi(HomogeneousGroup::heisenberg(1)), 1.0,
                                      10, 1),
                  PreconditionError);
}
