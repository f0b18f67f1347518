#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "revineq/group.hpp"
#include "revineq/params.hpp"
#include "revineq/quadrature.hpp"
#include "revineq/trials.hpp"
#include "revineq/verify.hpp"

namespace revineq {

struct GroupSpec {
  /// abelian | heisenberg | engel
  std::string name = "abelian";
  std::size_t n = 1;
  /// Rational weights as strings ("1", "3/2"); abelian only, overrides n.
  std::vector<std::string> weights;
};

struct NormSpec {
  /// euclidean | anisotropic | koranyi | cygan
  std::string kind = "euclidean";
};

/// A concrete profile (verify) plus the search box used by estimate.
struct ProfileSpec {
  std::string family = "exp_decay";
  std::vector<double> params{1.0};
  std::optional<std::vector<std::pair<double, double>>> box;

  TrialFamily trial_family() const;
};

/// Cartesian grid over inequality keys (p, q_prime, alpha, beta, lambda,
/// gamma). With solve_lambda, lambda is taken from the balance condition.
struct SweepSpec {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  bool solve_lambda = false;
  unsigned threads = 0;
};

struct RunConfig {
  std::string command = "verify";
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  GroupSpec group;
  NormSpec norm;
  QuadratureSpec quadrature;

  std::string inequality = "reverse_hardy";
  /// Q is filled in from the group.
  InequalityParams params;
  HardyVariant hardy_variant = HardyVariant::ball;

  ProfileSpec f;
  std::optional<ProfileSpec> h;
  SearchSpec search;
  SweepSpec sweep;

  /// Copies the run seed into the quadrature and search specs.
  void apply_seed(std::uint64_t s);
};

/// Flat sections of `key = <JSON value>` lines; '#' or ';' start comment
/// lines. Errors are ConfigError with "line N" and the key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Fully resolved configuration, embedded in every report.
nlohmann::ordered_json to_json(const RunConfig& config);

HomogeneousGroup make_group(const GroupSpec& spec);
QuasiNorm make_norm(const NormSpec& spec, const HomogeneousGroup& group);

}  // namespace revineq
