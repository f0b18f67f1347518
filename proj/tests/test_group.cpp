#include <doctest.h>

#include <cmath>

#include "revineq/errors.hpp"
#include "revineq/group.hpp"
#include "revineq/random.hpp"

using namespace revineq;

namespace {

std::vector<HomogeneousGroup> all_groups() {
  return {HomogeneousGroup::abelian(1), HomogeneousGroup::abelian(3),
          HomogeneousGroup::abelian({Rational{1, 1}, Rational{3, 2}}),
          HomogeneousGroup::heisenberg(1), HomogeneousGroup::heisenberg(2),
          HomogeneousGroup::engel()};
}

std::vector<QuasiNorm> all_norms() {
  const auto h1 = HomogeneousGroup::heisenberg(1);
  return {QuasiNorm::euclidean(HomogeneousGroup::abelian(2)),
          QuasiNorm::anisotropic(HomogeneousGroup::abelian({Rational{1, 1}, Rational{3, 2}})),
          QuasiNorm::anisotropic(h1),
          QuasiNorm::koranyi(h1),
          QuasiNorm::cygan(h1),
          QuasiNorm::anisotropic(HomogeneousGroup::engel())};
}

void check_point(const GroupPoint& got, std::initializer_list<double> want) {
  REQUIRE(got.size() == want.size());
  std::size_t i = 0;
  for (double w : want) CHECK(got[i++] == doctest::Approx(w).epsilon(1e-15));
}

}  // namespace

TEST_CASE("dilation follows the weights") {
  check_point(dilate(HomogeneousGroup::abelian(2), 3.0, {1.0, 1.0}), {3.0, 3.0});
  check_point(dilate(HomogeneousGroup::heisenberg(1), 2.0, {1.0, 0.0, 1.0}), {2.0, 0.0, 4.0});
  const auto e = HomogeneousGroup::engel();
  check_point(dilate(e, 2.0, {1.0, 1.0, 1.0, 1.0}), {2.0, 2.0, 4.0, 8.0});
  for (const auto& g : all_groups()) {
    GroupPoint x(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) x[i] = 0.3 * static_cast<double>(i) - 0.7;
    CHECK(dilate(g, 1.0, x).max_abs_diff(x) == 0.0);
  }
}

TEST_CASE("dilation rejects bad inputs") {
  const auto h = HomogeneousGroup::heisenberg(1);
  CHECK_THROWS_AS(dilate(h, 0.0, {1.0, 0.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(dilate(h, -1.0, {1.0, 0.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(dilate(h, 2.0, {1.0, 0.0}), ShapeError);
}

TEST_CASE("group laws") {
  check_point(group_mul(HomogeneousGroup::abelian(2), {1.0, 2.0}, {3.0, 4.0}), {4.0, 6.0});
  const auto h = HomogeneousGroup::heisenberg(1);
  check_point(group_mul(h, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}), {1.0, 1.0, 0.5});
  const GroupPoint x{0.3, -1.2, 2.5};
  check_point(group_mul(h, x, group_inv(h, x)), {0.0, 0.0, 0.0});
  check_point(group_inv(h, x), {-0.3, 1.2, -2.5});

  const auto e = HomogeneousGroup::engel();
  // x3 + y3 + x1 y2 and x4 + y4 + x1 y3 + x1^2 y2 / 2
  check_point(group_mul(e, {2.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 1.0, 0.0}), {2.0, 1.0, 3.0, 4.0});
  const GroupPoint z{0.7, -0.4, 1.1, 0.9};
  CHECK(group_mul(e, z, group_inv(e, z)).max_abs() < 1e-15);
  CHECK(group_mul(e, group_inv(e, z), z).max_abs() < 1e-15);
  CHECK_THROWS_AS(group_mul(h, {1.0, 0.0}, {1.0, 0.0, 0.0}), ShapeError);
}

TEST_CASE("homogeneous dimension is exact") {
  CHECK(HomogeneousGroup::heisenberg(1).homogeneous_dimension() == 4.0);
  CHECK(HomogeneousGroup::heisenberg(2).homogeneous_dimension() == 6.0);
  CHECK(HomogeneousGroup::engel().homogeneous_dimension() == 7.0);
  const auto g = HomogeneousGroup::abelian({Rational{1, 1}, Rational{3, 2}});
  CHECK(g.homogeneous_dimension_exact() == Rational{5, 2});
  CHECK(g.homogeneous_dimension() == 2.5);
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/2") == Rational{3, 2});
  CHECK(parse_rational("0.5") == Rational{1, 2});
  CHECK(parse_rational("2") == Rational{2, 1});
  CHECK(parse_rational("6/4") == Rational{3, 2});
  CHECK_THROWS_AS(parse_rational("abc"), ParameterError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParameterError);
  CHECK_THROWS_AS(parse_rational(""), ParameterError);
  CHECK_THROWS_AS(HomogeneousGroup::abelian({Rational{-1, 1}}), ParameterError);
}

TEST_CASE("group axioms on 10^4 random triples") {
  for (const auto& g : all_groups()) {
    CAPTURE(g.name());
    const auto rep = check_group_axioms(g, 10000, 11);
    CHECK(rep.associativity_residual <= 1e-10);
    CHECK(rep.automorphism_residual <= 1e-10);
    CHECK(rep.identity_residual <= 1e-12);
    CHECK(rep.inverse_residual <= 1e-12);
    CHECK(rep.passed());
  }
}

TEST_CASE("Koranyi and Cygan values") {
  const auto h = HomogeneousGroup::heisenberg(1);
  const auto k = QuasiNorm::koranyi(h);
  CHECK(k({1.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(k({0.0, 0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(k(dilate(h, 2.0, {1.0, 0.0, 0.0})) == doctest::Approx(2.0));
  CHECK(k({1.0, 0.0, 1.0}) == doctest::Approx(std::pow(2.0, 0.25)));
  const auto c = QuasiNorm::cygan(h);
  CHECK(c({0.0, 0.0, 1.0}) == doctest::Approx(2.0));
  CHECK(c({1.0, 1.0, 1.0}) == doctest::Approx(std::pow(4.0 + 16.0, 0.25)));
  CHECK_FALSE(k.is_true_norm());
  CHECK(c.is_true_norm());
  CHECK(QuasiNorm::euclidean(HomogeneousGroup::abelian(3))({3.0, 4.0, 12.0}) == doctest::Approx(13.0));
}

TEST_CASE("norm constructors check the group") {
  CHECK_THROWS_AS(QuasiNorm::euclidean(HomogeneousGroup::heisenberg(1)), ParameterError);
  CHECK_THROWS_AS(QuasiNorm::koranyi(HomogeneousGroup::abelian(3)), ParameterError);
  CHECK_THROWS_AS(QuasiNorm::cygan(HomogeneousGroup::engel()), ParameterError);
}

TEST_CASE("anisotropic gauge uses the lcm exponent") {
  // weights (1, 3/2): M = 3, so |x| = (x1^6 + |x2|^4)^{1/6}.
  const auto g = HomogeneousGroup::abelian({Rational{1, 1}, Rational{3, 2}});
  const auto n = QuasiNorm::anisotropic(g);
  CHECK(n({1.0, 1.0}) == doctest::Approx(std::pow(2.0, 1.0 / 6.0)));
  CHECK(n({0.0, 8.0}) == doctest::Approx(4.0));
}

TEST_CASE("quasi-norm axioms") {
  for (const auto& n : all_norms()) {
    CAPTURE(n.name());
    const auto rep = check_quasi_norm_axioms(n, 1000, 5);
    CHECK(rep.homogeneity_violation <= 1e-12);
    CHECK(rep.symmetry_violation <= 1e-12);
    CHECK(rep.nondegenerate);
    CHECK(rep.triangle_violation.has_value() == n.is_true_norm());
    if (rep.triangle_violation) CHECK(*rep.triangle_violation <= 1e-12);
    CHECK(rep.passed());
  }
}

TEST_CASE("homogeneity across six decades") {
  Rng rng(99);
  for (const auto& n : all_norms()) {
    const auto& g = n.group();
    for (int k = 0; k < 50; ++k) {
      const GroupPoint x = random_point(g, rng);
      const double base = n(x);
      for (double s : {1e-3, 1e-2, 0.1, 10.0, 100.0, 1e3})
        CHECK(std::abs(n(dilate(g, s, x)) - s * base) <= 1e-12 * s * base);
    }
  }
}

TEST_CASE("axiom checks are deterministic per seed") {
  const auto n = QuasiNorm::koranyi(HomogeneousGroup::heisenberg(1));
  const auto a = check_quasi_norm_axioms(n, 500, 3);
  const auto b = check_quasi_norm_axioms(n, 500, 3);
  CHECK(a.homogeneity_violation == b.homogeneity_violation);
  CHECK(a.symmetry_violation == b.symmetry_violation);
}

TEST_CASE("quasi-ball membership") {
  const auto h = HomogeneousGroup::heisenberg(1);
  const auto k = QuasiNorm::koranyi(h);
  const GroupPoint c{1.0, 0.0, 0.0};
  CHECK(k.in_ball(c, c, 0.1));
  CHECK(k.in_ball(c, group_mul(h, c, {0.5, 0.0, 0.0}), 0.6));
  CHECK_FALSE(k.in_ball(c, group_mul(h, c, {0.5, 0.0, 0.0}), 0.4));
}
