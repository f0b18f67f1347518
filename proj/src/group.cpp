#include "revineq/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "revineq/errors.hpp"
#include "revineq/random.hpp"

namespace revineq {

GroupPoint::GroupPoint(std::size_t n) : n_(n) {
  if (n > kMaxDim)
    throw ShapeError("group_core::GroupPoint", "dimension " + std::to_string(n) +
                                                   " exceeds the supported maximum " +
                                                   std::to_string(kMaxDim));
}

GroupPoint::GroupPoint(std::initializer_list<double> coords) : GroupPoint(coords.size()) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

GroupPoint GroupPoint::from(std::span<const double> coords) {
  GroupPoint p(coords.size());
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  return p;
}

bool GroupPoint::is_finite() const noexcept {
  return std::all_of(c_.begin(), c_.begin() + n_, [](double v) { return std::isfinite(v); });
}

double GroupPoint::max_abs_diff(const GroupPoint& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs(c_[i] - other.c_[i]));
  return m;
}

double GroupPoint::max_abs() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs(c_[i]));
  return m;
}

// --- Rational -------------------------------------------------------------

Rational Rational::normalized() const {
  if (den == 0) throw ParameterError("group_core::Rational", "zero denominator");
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  Rational r{num / g, den / g};
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  return r;
}

Rational operator+(Rational a, Rational b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  return Rational{a.num * (l / a.den) + b.num * (l / b.den), l}.normalized();
}

bool operator==(Rational a, Rational b) {
  a = a.normalized();
  b = b.normalized();
  return a.num == b.num && a.den == b.den;
}

std::string Rational::str() const {
  const Rational r = normalized();
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational parse_rational(const std::string& text) {
  const auto bad = [&] {
    return ParameterError("group_core::parse_rational", "not a rational weight: '" + text + "'");
  };
  if (text.empty()) throw bad();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    try {
      std::size_t used = 0;
      const long long n = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw bad();
      const std::string d_str = text.substr(slash + 1);
      const long long d = std::stoll(d_str, &used);
      if (used != d_str.size() || d == 0) throw bad();
      return Rational{n, d}.normalized();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  // Decimal: digits with at most one point.
  std::int64_t num = 0, den = 1;
  bool seen_point = false, seen_digit = false;
  std::size_t i = 0;
  const bool negative = text[0] == '-';
  if (negative || text[0] == '+') i = 1;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (num > (INT64_MAX - 9) / 10 || den > INT64_MAX / 10) throw bad();
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
    } else {
      throw bad();
    }
  }
  if (!seen_digit) throw bad();
  return Rational{negative ? -num : num, den}.normalized();
}

// --- HomogeneousGroup -----------------------------------------------------

HomogeneousGroup::HomogeneousGroup(std::string name, GroupLaw law, std::vector<Rational> weights)
    : name_(std::move(name)), law_(law), rweights_(std::move(weights)) {
  if (rweights_.empty() || rweights_.size() > kMaxDim)
    throw ShapeError("group_core::HomogeneousGroup",
                     "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  q_exact_ = Rational{0, 1};
  for (auto& w : rweights_) {
    w = w.normalized();
    if (w.num <= 0)
      throw ParameterError("group_core::HomogeneousGroup", "weights must be positive, got " + w.str());
    weights_.push_back(w.value());
    q_exact_ = q_exact_ + w;
  }
  q_ = q_exact_.value();
}

HomogeneousGroup HomogeneousGroup::abelian(std::size_t n) {
  return abelian(std::vector<Rational>(n, Rational{1, 1}));
}

HomogeneousGroup HomogeneousGroup::abelian(std::vector<Rational> weights) {
  const bool unit = std::all_of(weights.begin(), weights.end(),
                                [](Rational w) { return w == Rational{1, 1}; });
  std::string name = "R" + std::to_string(weights.size());
  if (!unit) {
    name += "[";
    for (std::size_t i = 0; i < weights.size(); ++i)
      name += (i ? "," : "") + weights[i].normalized().str();
    name += "]";
  }
  return HomogeneousGroup(std::move(name), GroupLaw::abelian, std::move(weights));
}

HomogeneousGroup HomogeneousGroup::heisenberg(std::size_t n) {
  if (n == 0 || 2 * n + 1 > kMaxDim)
    throw ShapeError("group_core::heisenberg", "unsupported Heisenberg rank " + std::to_string(n));
  std::vector<Rational> w(2 * n, Rational{1, 1});
  w.push_back(Rational{2, 1});
  return HomogeneousGroup("H" + std::to_string(n), GroupLaw::heisenberg, std::move(w));
}

HomogeneousGroup HomogeneousGroup::engel() {
  return HomogeneousGroup("engel", GroupLaw::engel,
                          {Rational{1, 1}, Rational{1, 1}, Rational{2, 1}, Rational{3, 1}});
}

void HomogeneousGroup::check_shape(const GroupPoint& x, const char* op) const {
  if (x.size() != dim())
    throw ShapeError(std::string("group_core::") + op,
                     "point has " + std::to_string(x.size()) + " coordinates, group " + name_ +
                         " has dimension " + std::to_string(dim()));
}

GroupPoint HomogeneousGroup::mul(const GroupPoint& x, const GroupPoint& y) const {
  check_shape(x, "group_mul");
  check_shape(y, "group_mul");
  GroupPoint z(dim());
  for (std::size_t i = 0; i < dim(); ++i) z[i] = x[i] + y[i];
  switch (law_) {
    case GroupLaw::abelian:
      break;
    case GroupLaw::heisenberg: {
      const std::size_t n = (dim() - 1) / 2;
      double sym = 0.0;
      for (std::size_t i = 0; i < n; ++i) sym += x[i] * y[n + i] - x[n + i] * y[i];
      z[2 * n] += 0.5 * sym;
      break;
    }
    case GroupLaw::engel:
      z[2] += x[0] * y[1];
      z[3] += x[0] * y[2] + 0.5 * x[0] * x[0] * y[1];
      break;
  }
  return z;
}

GroupPoint HomogeneousGroup::inv(const GroupPoint& x) const {
  check_shape(x, "group_inv");
  GroupPoint z(dim());
  if (law_ == GroupLaw::engel) {
    z[0] = -x[0];
    z[1] = -x[1];
    z[2] = -x[2] + x[0] * x[1];
    z[3] = -x[3] + x[0] * x[2] - 0.5 * x[0] * x[0] * x[1];
    return z;
  }
  for (std::size_t i = 0; i < dim(); ++i) z[i] = -x[i];
  return z;
}

GroupPoint HomogeneousGroup::dilate(double s, const GroupPoint& x) const {
  if (!(s > 0.0) || !std::isfinite(s))
    throw ParameterError("group_core::dilate", "dilation factor must be positive, got " +
                                                   std::to_string(s));
  check_shape(x, "dilate");
  GroupPoint z(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const double w = weights_[i];
    const double f = w == 1.0 ? s : (w == 2.0 ? s * s : std::pow(s, w));
    z[i] = f * x[i];
  }
  return z;
}

std::string HomogeneousGroup::key() const {
  std::string k = name_ + "{";
  for (std::size_t i = 0; i < rweights_.size(); ++i) k += (i ? "," : "") + rweights_[i].str();
  return k + "}";
}

GroupPoint dilate(const HomogeneousGroup& group, double s, const GroupPoint& x) {
  return group.dilate(s, x);
}
GroupPoint group_mul(const HomogeneousGroup& group, const GroupPoint& x, const GroupPoint& y) {
  return group.mul(x, y);
}
GroupPoint group_inv(const HomogeneousGroup& group, const GroupPoint& x) { return group.inv(x); }

// --- QuasiNorm ------------------------------------------------------------

QuasiNorm::QuasiNorm(const HomogeneousGroup& group, NormKind kind, bool true_norm)
    : group_(group), kind_(kind), true_norm_(true_norm) {}

QuasiNorm QuasiNorm::euclidean(const HomogeneousGroup& group) {
  const auto w = group.weights();
  if (group.law() != GroupLaw::abelian ||
      !std::all_of(w.begin(), w.end(), [](double v) { return v == 1.0; }))
    throw ParameterError("group_core::QuasiNorm",
                         "the Euclidean norm is homogeneous only on abelian groups with unit weights");
  return QuasiNorm(group, NormKind::euclidean, true);
}

QuasiNorm QuasiNorm::anisotropic(const HomogeneousGroup& group) {
  QuasiNorm n(group, NormKind::anisotropic, false);
  // M = lcm of rational weights = lcm(numerators) / gcd(denominators).
  std::int64_t lnum = 1, gden = 0;
  for (const Rational& w : group.rational_weights()) {
    lnum = std::lcm(lnum, w.num);
    gden = std::gcd(gden, w.den);
  }
  const Rational m = Rational{lnum, gden}.normalized();
  n.aniso_m2_ = 2.0 * m.value();
  for (const Rational& w : group.rational_weights()) {
    // 2M / nu_i is an even integer by construction of M.
    const Rational e = Rational{2 * m.num * w.den, m.den * w.num}.normalized();
    n.aniso_exponents_.push_back(e.value());
  }
  return n;
}

QuasiNorm QuasiNorm::koranyi(const HomogeneousGroup& group) {
  if (group.law() != GroupLaw::heisenberg)
    throw ParameterError("group_core::QuasiNorm", "the Koranyi gauge requires a Heisenberg group");
  return QuasiNorm(group, NormKind::koranyi, false);
}

QuasiNorm QuasiNorm::cygan(const HomogeneousGroup& group) {
  if (group.law() != GroupLaw::heisenberg)
    throw ParameterError("group_core::QuasiNorm", "the Cygan gauge requires a Heisenberg group");
  return QuasiNorm(group, NormKind::cygan, true);
}

double QuasiNorm::anisotropic_base(const GroupPoint& x) const {
  const auto w = group_.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s = std::max(s, std::pow(std::abs(x[i]), 1.0 / w[i]));
  if (s == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double scaled = std::abs(x[i]) / std::pow(s, w[i]);
    acc += std::pow(scaled, aniso_exponents_[i]);
  }
  return s * std::pow(acc, 1.0 / aniso_m2_);
}

double QuasiNorm::operator()(const GroupPoint& x) const {
  if (x.size() != group_.dim())
    throw ShapeError("group_core::quasi_norm", "point dimension does not match the group");
  switch (kind_) {
    case NormKind::euclidean: {
      double scale = x.max_abs();
      if (scale == 0.0) return 0.0;
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] / scale) * (x[i] / scale);
      return scale * std::sqrt(acc);
    }
    case NormKind::anisotropic:
      if (group_.inverse_is_negation()) return anisotropic_base(x);
      return 0.5 * (anisotropic_base(x) + anisotropic_base(group_.inv(x)));
    case NormKind::koranyi:
    case NormKind::cygan: {
      const std::size_t n2 = x.size() - 1;
      double scale = 0.0;
      for (std::size_t i = 0; i < n2; ++i) scale = std::max(scale, std::abs(x[i]));
      double z2 = 0.0;
      if (scale > 0.0) {
        for (std::size_t i = 0; i < n2; ++i) z2 += (x[i] / scale) * (x[i] / scale);
        z2 *= scale * scale;
      }
      const double t = kind_ == NormKind::cygan ? 4.0 * x[n2] : x[n2];
      return std::sqrt(std::hypot(z2, t));
    }
  }
  return 0.0;
}

std::string QuasiNorm::name() const {
  switch (kind_) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::anisotropic: return "anisotropic";
    case NormKind::koranyi: return "koranyi";
    case NormKind::cygan: return "cygan";
  }
  return "?";
}

std::string QuasiNorm::key() const { return group_.key() + "/" + name(); }

std::vector<double> QuasiNorm::unit_ball_box() const {
  std::vector<double> box(group_.dim(), 1.0);
  switch (kind_) {
    case NormKind::euclidean:
      break;
    case NormKind::anisotropic:
      if (!group_.inverse_is_negation()) {
        // (|x| + |x^{-1}|)/2 <= 1 gives base(x) <= 2.
        const auto w = group_.weights();
        for (std::size_t i = 0; i < box.size(); ++i) box[i] = std::pow(2.0, w[i]);
      }
      break;
    case NormKind::koranyi:
      break;
    case NormKind::cygan:
      box.back() = 0.25;
      break;
  }
  return box;
}

bool QuasiNorm::in_ball(const GroupPoint& center, const GroupPoint& y, double radius) const {
  return (*this)(group_.mul(group_.inv(center), y)) < radius;
}

double quasi_norm(const QuasiNorm& norm, const GroupPoint& x) { return norm(x); }

// --- axiom checks ---------------------------------------------------------

GroupPoint random_point(const HomogeneousGroup& group, Rng& rng, double spread_decades) {
  GroupPoint x(group.dim());
  const double scale = std::pow(10.0, rng.uniform(-spread_decades, spread_decades));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = scale * rng.normal();
  return x;
}

namespace {

double rel_residual(const GroupPoint& a, const GroupPoint& b) {
  return a.max_abs_diff(b) / (1.0 + std::max(a.max_abs(), b.max_abs()));
}

constexpr std::array<double, 7> kDecadeScales{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};

}  // namespace

bool GroupAxiomReport::passed(double tol) const {
  return identity_residual <= tol && inverse_residual <= tol && associativity_residual <= tol &&
         automorphism_residual <= tol;
}

GroupAxiomReport check_group_axioms(const HomogeneousGroup& group, std::size_t samples,
                                    std::uint64_t seed) {
  Rng rng(stream_seed(seed, 0x67726f7570));
  GroupAxiomReport rep;
  rep.samples = samples;
  const GroupPoint e = group.identity();
  for (std::size_t k = 0; k < samples; ++k) {
    const GroupPoint x = random_point(group, rng, 0.5);
    const GroupPoint y = random_point(group, rng, 0.5);
    const GroupPoint z = random_point(group, rng, 0.5);
    rep.identity_residual = std::max({rep.identity_residual, rel_residual(group.mul(x, e), x),
                                      rel_residual(group.mul(e, x), x)});
    const GroupPoint xi = group.inv(x);
    rep.inverse_residual = std::max({rep.inverse_residual, rel_residual(group.mul(x, xi), e),
                                     rel_residual(group.mul(xi, x), e)});
    rep.associativity_residual =
        std::max(rep.associativity_residual,
                 rel_residual(group.mul(group.mul(x, y), z), group.mul(x, group.mul(y, z))));
    const double s = k < kDecadeScales.size() ? kDecadeScales[k]
                                              : std::pow(10.0, rng.uniform(-3.0, 3.0));
    const GroupPoint lhs = group.mul(group.dilate(s, x), group.dilate(s, y));
    const GroupPoint rhs = group.dilate(s, group.mul(x, y));
    // Relative to the scale of the dilated operands.
    const double denom = 1.0 + std::max(lhs.max_abs(), rhs.max_abs());
    rep.automorphism_residual = std::max(rep.automorphism_residual, lhs.max_abs_diff(rhs) / denom);
  }
  return rep;
}

bool NormAxiomReport::passed(double tol) const {
  return homogeneity_violation <= tol && symmetry_violation <= tol && nondegenerate &&
         (!triangle_violation || *triangle_violation <= tol);
}

NormAxiomReport check_quasi_norm_axioms(const QuasiNorm& norm, std::size_t samples,
                                        std::uint64_t seed) {
  const HomogeneousGroup& group = norm.group();
  Rng rng(stream_seed(seed, 0x6e6f726d));
  NormAxiomReport rep;
  rep.samples = samples;
  if (norm(group.identity()) != 0.0) rep.nondegenerate = false;
  double tri = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const GroupPoint x = random_point(group, rng);
    const double nx = norm(x);
    if (!(nx > 0.0)) rep.nondegenerate = false;
    const double s = k < kDecadeScales.size() ? kDecadeScales[k]
                                              : std::pow(10.0, rng.uniform(-3.0, 3.0));
    const double ns = norm(group.dilate(s, x));
    rep.homogeneity_violation = std::max(rep.homogeneity_violation, std::abs(ns - s * nx) / (s * nx));
    const double ninv = norm(group.inv(x));
    rep.symmetry_violation = std::max(rep.symmetry_violation, std::abs(ninv - nx) / nx);
    if (norm.is_true_norm()) {
      const GroupPoint y = random_point(group, rng);
      const double ny = norm(y);
      const double nxy = norm(group.mul(x, y));
      tri = std::max(tri, (nxy - nx - ny) / (nx + ny));
    }
  }
  if (norm.is_true_norm()) rep.triangle_violation = std::max(tri, 0.0);
  return rep;
}

}  // namespace revineq
