#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace revineq {

inline constexpr std::size_t kMaxDim = 8;

/// A point of the group in its fixed global chart. Fixed capacity so that
/// hot loops (group products inside double integrals) never allocate.
class GroupPoint {
 public:
  GroupPoint() = default;
  explicit GroupPoint(std::size_t n);
  GroupPoint(std::initializer_list<double> coords);
  static GroupPoint from(std::span<const double> coords);

  std::size_t size() const noexcept { return n_; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  std::span<double> coords() noexcept { return {c_.data(), n_}; }
  std::span<const double> coords() const noexcept { return {c_.data(), n_}; }

  bool is_finite() const noexcept;
  /// max_i |x_i - y_i|
  double max_abs_diff(const GroupPoint& other) const;
  double max_abs() const noexcept;

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t n_ = 0;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational normalized() const;
  friend Rational operator+(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b);
  std::string str() const;
};

/// Parses "2", "3/2" or a finite decimal such as "0.5" into a rational.
Rational parse_rational(const std::string& text);

enum class GroupLaw { abelian, heisenberg, engel };

class HomogeneousGroup {
 public:
  /// (R^n, +) with unit weights.
  static HomogeneousGroup abelian(std::size_t n);
  /// (R^n, +) graded by arbitrary positive rational weights.
  static HomogeneousGroup abelian(std::vector<Rational> weights);
  /// Heisenberg group H^n on R^{2n+1}, coordinates (x, y, t), weights
  /// (1,...,1,2) and law t'' = t + t' + (x.y' - y.x')/2.
  static HomogeneousGroup heisenberg(std::size_t n);
  /// Step-3 group on R^4 with weights (1,1,2,3):
  /// (x.y)_3 = x3 + y3 + x1 y2,  (x.y)_4 = x4 + y4 + x1 y3 + x1^2 y2 / 2.
  static HomogeneousGroup engel();

  const std::string& name() const noexcept { return name_; }
  GroupLaw law() const noexcept { return law_; }
  std::size_t dim() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<Rational>& rational_weights() const noexcept { return rweights_; }

  /// Q = sum of weights.
  double homogeneous_dimension() const noexcept { return q_; }
  Rational homogeneous_dimension_exact() const noexcept { return q_exact_; }

  bool inverse_is_negation() const noexcept { return law_ != GroupLaw::engel; }

  GroupPoint identity() const { return GroupPoint(dim()); }
  GroupPoint mul(const GroupPoint& x, const GroupPoint& y) const;
  GroupPoint inv(const GroupPoint& x) const;
  GroupPoint dilate(double s, const GroupPoint& x) const;

  /// Stable identifier used for cache keys and reports.
  std::string key() const;

 private:
  HomogeneousGroup(std::string name, GroupLaw law, std::vector<Rational> weights);
  void check_shape(const GroupPoint& x, const char* op) const;

  std::string name_;
  GroupLaw law_ = GroupLaw::abelian;
  std::vector<Rational> rweights_;
  std::vector<double> weights_;
  Rational q_exact_;
  double q_ = 0.0;
};

GroupPoint dilate(const HomogeneousGroup& group, double s, const GroupPoint& x);
GroupPoint group_mul(const HomogeneousGroup& group, const GroupPoint& x, const GroupPoint& y);
GroupPoint group_inv(const HomogeneousGroup& group, const GroupPoint& x);

enum class NormKind { euclidean, anisotropic, koranyi, cygan };

/// Homogeneous quasi-norm: |D_s x| = s|x|, |x^{-1}| = |x|, |x| = 0 iff x = 0.
class QuasiNorm {
 public:
  /// Euclidean norm; abelian groups with unit weights only.
  static QuasiNorm euclidean(const HomogeneousGroup& group);
  /// (sum_i |x_i|^{2M/nu_i})^{1/(2M)}, M = lcm of the weights. On groups whose
  /// inverse is not negation the gauge is symmetrized as (|x| + |x^{-1}|)/2.
  static QuasiNorm anisotropic(const HomogeneousGroup& group);
  /// Koranyi gauge ((|x|^2 + |y|^2)^2 + t^2)^{1/4} on H^n.
  static QuasiNorm koranyi(const HomogeneousGroup& group);
  /// ((|x|^2 + |y|^2)^2 + 16 t^2)^{1/4} on H^n; with this group law it
  /// satisfies the triangle inequality (Cygan).
  static QuasiNorm cygan(const HomogeneousGroup& group);

  double operator()(const GroupPoint& x) const;

  const HomogeneousGroup& group() const noexcept { return group_; }
  NormKind kind() const noexcept { return kind_; }
  bool is_true_norm() const noexcept { return true_norm_; }
  std::string name() const;
  std::string key() const;

  /// b_i with |x| <= 1  =>  |x_i| <= b_i.
  std::vector<double> unit_ball_box() const;

  /// y in B(center, R) = { y : |center^{-1} y| < R }.
  bool in_ball(const GroupPoint& center, const GroupPoint& y, double radius) const;

 private:
  QuasiNorm(const HomogeneousGroup& group, NormKind kind, bool true_norm);
  double anisotropic_base(const GroupPoint& x) const;

  HomogeneousGroup group_;
  NormKind kind_;
  bool true_norm_;
  std::vector<double> aniso_exponents_;  // 2M / nu_i
  double aniso_m2_ = 2.0;                // 2M
};

double quasi_norm(const QuasiNorm& norm, const GroupPoint& x);

struct GroupAxiomReport {
  std::size_t samples = 0;
  double identity_residual = 0.0;
  double inverse_residual = 0.0;
  double associativity_residual = 0.0;
  double automorphism_residual = 0.0;

  bool passed(double tol = 1e-10) const;
};

/// Group axioms and the automorphism property of D_s on pseudo-random
/// triples. Residuals are max-norm coordinate differences relative to
/// 1 + |value|_inf.
GroupAxiomReport check_group_axioms(const HomogeneousGroup& group, std::size_t samples,
                                    std::uint64_t seed);

struct NormAxiomReport {
  std::size_t samples = 0;
  double homogeneity_violation = 0.0;  // relative
  double symmetry_violation = 0.0;     // relative
  bool nondegenerate = true;           // |0| = 0 and |x| > 0 on samples
  /// Positive part of (|xy| - |x| - |y|) / (|x| + |y|); empty when the gauge
  /// is not declared a norm (triangle inequality not asserted).
  std::optional<double> triangle_violation;

  bool passed(double tol = 1e-12) const;
};

NormAxiomReport check_quasi_norm_axioms(const QuasiNorm& norm, std::size_t samples,
                                        std::uint64_t seed);

/// Random point with coordinates ~ N(0,1) scaled by a log-uniform factor.
class Rng;
GroupPoint random_point(const HomogeneousGroup& group, Rng& rng, double spread_decades = 1.0);

}  // namespace revineq
