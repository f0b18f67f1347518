#include "revineq/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "revineq/errors.hpp"
#include "revineq/random.hpp"
#include "revineq/report.hpp"

namespace revineq {

namespace {

using ojson = nlohmann::ordered_json;

bool needs_h(const std::string& inequality) {
  return inequality == "stein_weiss" || inequality == "reverse_hls";
}

RadialProfile build_profile(const ProfileSpec& spec) {
  if (spec.family == "indicator") {
    if (spec.params.size() != 1)
      throw ConfigError("cli::build_profile", "indicator takes one parameter (radius)");
    return radial_indicator(spec.params[0]);
  }
  TrialFamily fam = spec.trial_family();
  // A concrete profile only has to be well defined, so without an explicit
  // box the family is widened to contain the requested parameters.
  if (!spec.box && spec.params.size() == fam.param_box.size())
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
      fam.param_box[i].lo = std::min(fam.param_box[i].lo, spec.params[i]);
      fam.param_box[i].hi = std::max(fam.param_box[i].hi, spec.params[i]);
    }
  return make_profile(fam, spec.params);
}

struct Setup {
  HomogeneousGroup group;
  QuasiNorm norm;
  InequalityParams params;

  explicit Setup(const RunConfig& c)
      : group(make_group(c.group)), norm(make_norm(c.norm, group)), params(c.params) {
    params.Q = group.homogeneous_dimension();
  }
};

int run_verify(const RunConfig& c, RunResult& out) {
  const Setup s(c);
  const RadialProfile f = build_profile(c.f);
  std::optional<RadialProfile> h;
  if (needs_h(c.inequality)) {
    if (!c.h) throw ConfigError("cli::verify", "section [h] is required for " + c.inequality);
    h = build_profile(*c.h);
  }
  const VerificationReport rep =
      run_verifier(c.inequality, s.params, c.hardy_variant, f, h ? &*h : nullptr, s.norm, c.quadrature);
  out.report["result"] = to_json(rep);
  return rep.pass() ? kExitPass : kExitMarginFailure;
}

int run_estimate(const RunConfig& c, RunResult& out) {
  const Setup s(c);
  EstimateRequest req;
  req.inequality = c.inequality;
  req.params = s.params;
  req.family = c.f.trial_family();
  req.hardy_variant = c.hardy_variant;
  if (needs_h(c.inequality)) {
    if (!c.h) throw ConfigError("cli::estimate", "section [h] is required for " + c.inequality);
    req.second_family = c.h->trial_family();
  }
  const EstimateRecord rec = estimate_best_constant(req, s.norm, c.quadrature, c.search);
  out.report["result"] = to_json(rec);
  std::ostringstream trace;
  write_trace_csv(trace, rec);
  out.trace_csv = trace.str();
  return rec.consistent() ? kExitPass : kExitMarginFailure;
}

void set_param(InequalityParams& p, const std::string& key, double v) {
  if (key == "p") p.p = v;
  else if (key == "q_prime") p.q_prime = v;
  else if (key == "alpha") p.alpha = v;
  else if (key == "beta") p.beta = v;
  else if (key == "lambda") p.lambda = v;
  else if (key == "gamma") p.gamma_override = v;
}

int run_sweep(const RunConfig& c, RunResult& out) {
  const Setup s(c);
  if (c.sweep.axes.empty()) throw ConfigError("cli::sweep", "section [sweep] declares no grid");
  const RadialProfile f = build_profile(c.f);
  std::optional<RadialProfile> h;
  if (needs_h(c.inequality)) {
    if (!c.h) throw ConfigError("cli::sweep", "section [h] is required for " + c.inequality);
    h = build_profile(*c.h);
  }

  // Cartesian product, first declared axis varying slowest.
  std::vector<InequalityParams> points{s.params};
  for (const auto& [key, values] : c.sweep.axes) {
    std::vector<InequalityParams> next;
    for (const auto& base : points)
      for (double v : values) {
        next.push_back(base);
        set_param(next.back(), key, v);
      }
    points.swap(next);
  }
  if (c.sweep.solve_lambda)
    for (auto& p : points) p.lambda = balance_lambda(p.Q, p.p, p.q_prime, p.alpha, p.beta);

  QuadratureSpec spec = c.quadrature;
  if (resolve_threads(c.sweep.threads) > 1) spec.threads = 1;
  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), c.sweep.threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.inequality = c.inequality;
    row.params = points[i];
    if (needs_h(c.inequality)) {
      const auto adm = validate_params(row.params);
      if (!adm.admissible()) {
        std::string why;
        for (const auto& m : adm.failures()) why += (why.empty() ? "" : "; ") + m;
        row.status = "skipped: " + why;
        return;
      }
    }
    try {
      row.report = run_verifier(c.inequality, row.params, c.hardy_variant, f, h ? &*h : nullptr,
                                s.norm, spec);
      row.status = row.report->pass() ? "ok" : "margin failure";
    } catch (const ParameterError& e) {
      row.status = std::string("skipped: ") + e.what();
    } catch (const NumericalError& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  std::ostringstream csv;
  write_csv_header(csv);
  std::size_t passed = 0, failed = 0, skipped = 0, errors = 0;
  ojson list = ojson::array();
  for (const auto& row : rows) {
    write_csv_row(csv, row);
    if (row.report) (row.report->pass() ? passed : failed)++;
    else if (row.status.rfind("skipped", 0) == 0) ++skipped;
    else ++errors;
    ojson j = {{"params", {{"p", row.params.p}, {"q_prime", row.params.q_prime},
                           {"alpha", row.params.alpha}, {"beta", row.params.beta},
                           {"lambda", row.params.lambda}}},
               {"status", row.status}};
    if (row.report) j["report"] = to_json(*row.report);
    list.push_back(j);
  }
  out.sweep_csv = csv.str();
  out.report["result"] = {{"points", rows.size()}, {"passed", passed}, {"failed", failed},
                          {"skipped", skipped},    {"errors", errors}, {"rows", list}};
  if (errors > 0) return kExitNumericalError;
  return failed > 0 ? kExitMarginFailure : kExitPass;
}

int run_axioms(const RunConfig& c, RunResult& out) {
  const Setup s(c);
  const auto& spec = c.quadrature;
  spec.validate();
  ojson checks = ojson::array();
  bool all = true;
  auto add = [&](const std::string& name, bool pass, ojson detail) {
    all = all && pass;
    checks.push_back({{"check", name}, {"pass", pass}, {"detail", std::move(detail)}});
  };

  const auto ga = check_group_axioms(s.group, 1000, c.seed);
  add("group_axioms", ga.passed(),
      {{"identity", ga.identity_residual}, {"inverse", ga.inverse_residual},
       {"associativity", ga.associativity_residual}, {"automorphism", ga.automorphism_residual}});
  const auto na = check_quasi_norm_axioms(s.norm, 1000, c.seed);
  ojson nd = {{"homogeneity", na.homogeneity_violation}, {"symmetry", na.symmetry_violation},
              {"nondegenerate", na.nondegenerate}};
  if (na.triangle_violation) nd["triangle"] = *na.triangle_violation;
  add("norm_axioms", na.passed(), nd);

  const auto S = sphere_measure(s.norm, spec);
  const RadialProfile g = make_profile(TrialFamily::exp_decay(), {1.0});
  const auto pc = polar_consistency_check(s.norm, g, spec);
  add("polar_consistency", pc.passed(),
      {{"cartesian", pc.cartesian.value}, {"polar", pc.polar_value}, {"stderr", pc.combined_stderr}});
  auto comparisons = [&](const std::string& name, const std::vector<StochasticComparison>& v) {
    for (const auto& cmp : v)
      add(name + ":" + cmp.label, cmp.passed(),
          {{"lhs", cmp.lhs}, {"rhs", cmp.rhs}, {"stderr", cmp.combined_stderr}});
  };
  comparisons("haar_invariance", check_haar_invariance(s.norm, spec, 5));
  comparisons("dilation_scaling", check_dilation_scaling(s.norm, spec, {0.5, 2.0}));
  if (s.norm.is_true_norm()) {
    const double lambda = c.params.lambda > 0.0 ? c.params.lambda : 1.0;
    const auto kb = check_kernel_bounds(s.norm, lambda, 10000, c.seed);
    add("kernel_bounds", kb.passed(),
        {{"step1_violations", kb.step1_violations}, {"step2_violations", kb.step2_violations},
         {"worst_step1", kb.worst_step1}, {"worst_step2", kb.worst_step2}});
  }
  out.report["result"] = {{"group", s.group.name()},
                          {"norm", s.norm.name()},
                          {"sphere_measure", {{"value", S.value}, {"stderr", S.stderr_estimate}}},
                          {"checks", checks}};
  return all ? kExitPass : kExitMarginFailure;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw ConfigError("cli::run", "cannot write '" + path.string() + "'");
  o << text;
}

}  // namespace

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e)) return kExitConfigError;
  return kExitNumericalError;
}

RunResult execute(const RunConfig& config) {
  RunResult out;
  out.report["command"] = config.command;
  RunConfig resolved = config;
  try {
    resolved.params.Q = make_group(config.group).homogeneous_dimension();
  } catch (const Error&) {
    // Reported below when the command builds the group.
  }
  out.report["config"] = to_json(resolved);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (config.command == "verify") out.exit_status = run_verify(config, out);
    else if (config.command == "estimate") out.exit_status = run_estimate(config, out);
    else if (config.command == "sweep") out.exit_status = run_sweep(config, out);
    else if (config.command == "axioms") out.exit_status = run_axioms(config, out);
    else throw ConfigError("cli::run", "unknown command '" + config.command + "'");
  } catch (const Error& e) {
    out.exit_status = exit_status_for(e);
    out.report["error"] = {{"origin", e.origin()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out.exit_status = exit_status_for(e);
    out.report["error"] = {{"origin", "cli::run"}, {"message", e.what()}};
  }
  out.report["exit_status"] = out.exit_status;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out.metadata = {
      {"runtime_seconds",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
      {"timestamp", stamp}};
  return out;
}

int run(const RunConfig& config, std::ostream& log) {
  const RunResult res = execute(config);
  const std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  try {
    write_file(dir / "report.json", res.report.dump(2) + "\n");
    write_file(dir / "metadata.json", res.metadata.dump(2) + "\n");
    if (!res.sweep_csv.empty()) write_file(dir / "sweep.csv", res.sweep_csv);
    if (!res.trace_csv.empty()) write_file(dir / "trace.csv", res.trace_csv);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (res.report.contains("error")) {
    log << "error: " << res.report["error"]["message"].get<std::string>() << "\n";
  } else {
    const auto& r = res.report["result"];
    if (config.command == "verify")
      log << r["inequality"].get<std::string>() << ": ratio " << r["ratio"].dump() << " constant "
          << r["constant"].dump() << (r["pass"].get<bool>() ? " PASS" : " FAIL") << "\n";
    else if (config.command == "estimate")
      log << r["inequality"].get<std::string>() << ": estimate " << r["estimate"].dump()
          << " constant " << r["constant"].dump() << "\n";
    else if (config.command == "sweep")
      log << "sweep: " << r["points"].dump() << " points, " << r["passed"].dump() << " passed, "
          << r["failed"].dump() << " failed, " << r["skipped"].dump() << " skipped, "
          << r["errors"].dump() << " errors\n";
    else
      log << "axioms: " << r["checks"].size() << " checks\n";
  }
  log << "exit status " << res.exit_status << "\n";
  return res.exit_status;
}

}  // namespace revineq
