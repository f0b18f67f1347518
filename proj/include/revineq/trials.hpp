#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "revineq/group.hpp"
#include "revineq/params.hpp"
#include "revineq/profile.hpp"
#include "revineq/quadrature.hpp"
#include "revineq/verify.hpp"

namespace revineq {

struct ParamRange {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

/// Parametric radial family. Parameters are positive and searched in log
/// space, so every box satisfies 0 < lo <= hi.
struct TrialFamily {
  std::string family_tag;
  std::vector<ParamRange> param_box;
  bool monotone_decreasing = true;

  /// e^{-c r}
  static TrialFamily exp_decay(double c_lo = 0.25, double c_hi = 4.0);
  /// (1 + r)^{-s}
  static TrialFamily power_decay(double s_lo = 2.0, double s_hi = 40.0);
  /// e^{-c r^2}
  static TrialFamily gaussian(double c_lo = 0.25, double c_hi = 4.0);
  /// exp(1 - 1/(1 - (r/R)^2)) on [0, R), zero beyond.
  static TrialFamily smooth_bump(double R_lo = 0.5, double R_hi = 4.0);
  /// Default box for a tag; ConfigError for unknown tags.
  static TrialFamily by_tag(const std::string& tag);

  std::size_t dim() const { return param_box.size(); }
  bool contains(const std::vector<double>& params) const;
  /// Geometric midpoint of the box.
  std::vector<double> center() const;
  void validate() const;
};

const std::vector<std::string>& family_tags();

/// Profile with its analytic derivative registered.
RadialProfile make_profile(const TrialFamily& family, const std::vector<double>& params);

enum class SearchMethod { grid, nelder_mead };

std::string to_string(SearchMethod m);
SearchMethod parse_search_method(const std::string& name);

struct SearchSpec {
  SearchMethod method = SearchMethod::nelder_mead;
  std::size_t budget = 60;
  std::uint64_t seed = 1;
  std::size_t restarts = 2;
  unsigned threads = 0;

  void validate() const;
};

struct RatioSample {
  double ratio = 0.0;
  double stderr_estimate = 0.0;
  double constant = 0.0;
  double constant_stderr = 0.0;
};

struct TraceRow {
  std::size_t eval = 0;
  std::size_t restart = 0;
  std::vector<double> params;
  std::optional<RatioSample> sample;
  /// "ok" or the error message of a failed evaluation.
  std::string status = "ok";
};

struct EstimateRecord {
  std::string inequality;
  Direction direction = Direction::reverse;
  std::vector<std::string> param_names;
  /// Minimum observed ratio (reverse) or maximum (forward).
  double estimate = 0.0;
  double stderr_estimate = 0.0;
  std::vector<double> argbest;
  double constant = 0.0;
  double constant_stderr = 0.0;
  std::size_t evaluations = 0;
  std::size_t failed = 0;
  std::vector<TraceRow> trace;

  /// Reverse: estimate >= constant - tol; forward: estimate <= constant + tol.
  bool consistent() const;
};

using RatioObjective = std::function<RatioSample(const std::vector<double>&)>;

/// Derivative-free search of `objective` over the box (log coordinates).
/// Evaluations raising NumericalError are recorded and skipped; ParameterError
/// propagates. The evaluation sequence for budget B is a prefix of the one
/// for any larger budget, so the reported extremum is monotone in B.
EstimateRecord optimize_ratio(const RatioObjective& objective,
                              const std::vector<ParamRange>& box, Direction direction,
                              const SearchSpec& search);

/// Estimates the empirical best constant of a named inequality (see
/// inequality_names()) over one family, or a pair (f, h) for stein_weiss and
/// reverse_hls. `reverse_integral_hardy` takes `hardy_variant`. The same
/// quadrature seed is used for every evaluation.
struct EstimateRequest {
  std::string inequality;
  InequalityParams params;
  TrialFamily family;
  std::optional<TrialFamily> second_family;
  HardyVariant hardy_variant = HardyVariant::ball;
};

EstimateRecord estimate_best_constant(const EstimateRequest& request, const QuasiNorm& norm,
                                      const QuadratureSpec& spec, const SearchSpec& search);

/// Runs one named verifier for concrete profiles.
VerificationReport run_verifier(const std::string& inequality, const InequalityParams& params,
                                HardyVariant hardy_variant, const RadialProfile& f,
                                const RadialProfile* h, const QuasiNorm& norm,
                                const QuadratureSpec& spec);

}  // namespace revineq
