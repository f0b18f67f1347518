#include "revineq/trials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "revineq/errors.hpp"
#include "revineq/random.hpp"

namespace revineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

TrialFamily one_param(std::string tag, std::string name, double lo, double hi) {
  TrialFamily f{std::move(tag), {{std::move(name), lo, hi}}, true};
  f.validate();
  return f;
}

double radical_inverse(std::size_t k, unsigned base) {
  double inv = 1.0 / base, out = 0.0, f = inv;
  while (k > 0) {
    out += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return out;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

struct LogBox {
  std::vector<double> lo, hi;

  explicit LogBox(const std::vector<ParamRange>& box) {
    for (const auto& r : box) {
      lo.push_back(std::log(r.lo));
      hi.push_back(std::log(r.hi));
    }
  }
  std::size_t dim() const { return lo.size(); }
  std::vector<double> clamp(std::vector<double> u) const {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::clamp(u[i], lo[i], hi[i]);
    return u;
  }
  std::vector<double> to_params(const std::vector<double>& u) const {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      x[i] = std::clamp(std::exp(u[i]), std::exp(lo[i]), std::exp(hi[i]));
    return x;
  }
  std::vector<double> center() const {
    std::vector<double> u(dim());
    for (std::size_t i = 0; i < dim(); ++i) u[i] = 0.5 * (lo[i] + hi[i]);
    return u;
  }
};

// One evaluation as seen by the optimizer: objective value to minimize
// (+inf on failure) plus the trace row.
struct Evaluator {
  const RatioObjective& objective;
  const LogBox& box;
  Direction direction;

  std::pair<double, TraceRow> operator()(const std::vector<double>& u, std::size_t restart) const {
    TraceRow row;
    row.restart = restart;
    row.params = box.to_params(u);
    try {
      const RatioSample s = objective(row.params);
      if (!std::isfinite(s.ratio))
        throw EvaluationError("trials::optimize_ratio", "non-finite ratio " + fmt(s.ratio));
      row.sample = s;
      return {direction == Direction::reverse ? s.ratio : -s.ratio, std::move(row)};
    } catch (const NumericalError& e) {
      row.status = e.what();
      return {kInf, std::move(row)};
    }
  }
};

std::vector<TraceRow> nelder_mead_run(const Evaluator& eval, const std::vector<double>& start,
                                      std::size_t cap, std::size_t restart) {
  const LogBox& box = eval.box;
  const std::size_t d = box.dim();
  std::vector<TraceRow> trace;
  auto f = [&](const std::vector<double>& u) {
    auto [v, row] = eval(u, restart);
    trace.push_back(std::move(row));
    return v;
  };

  std::vector<std::vector<double>> simplex{box.clamp(start)};
  for (std::size_t i = 0; i < d; ++i) {
    auto v = simplex[0];
    const double step = 0.25 * (box.hi[i] - box.lo[i]);
    v[i] = v[i] + step <= box.hi[i] ? v[i] + step : v[i] - step;
    simplex.push_back(box.clamp(v));
  }
  std::vector<double> fv;
  for (const auto& v : simplex) {
    if (trace.size() >= cap) return trace;
    fv.push_back(f(v));
  }

  while (trace.size() < cap) {
    std::vector<std::size_t> order(simplex.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    {
      decltype(simplex) s2;
      std::vector<double> f2;
      for (auto i : order) {
        s2.push_back(simplex[i]);
        f2.push_back(fv[i]);
      }
      simplex.swap(s2);
      fv.swap(f2);
    }
    const double best = fv.front(), worst = fv.back();
    if (!std::isfinite(best)) break;
    double diam = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) diam = std::max(diam, std::abs(simplex[i][j] - simplex[0][j]));
    if ((std::isfinite(worst) && worst - best <= 1e-12 * std::abs(best)) || diam <= 1e-8) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j] / static_cast<double>(d);
    auto along = [&](double t) {
      std::vector<double> v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = centroid[j] + t * (simplex.back()[j] - centroid[j]);
      return box.clamp(v);
    };

    const auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv.front()) {
      if (trace.size() >= cap) break;
      const auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        simplex.back() = xe;
        fv.back() = fe;
      } else {
        simplex.back() = xr;
        fv.back() = fr;
      }
      continue;
    }
    if (fr < fv[fv.size() - 2]) {
      simplex.back() = xr;
      fv.back() = fr;
      continue;
    }
    if (trace.size() >= cap) break;
    const bool outside = fr < fv.back();
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : fv.back())) {
      simplex.back() = xc;
      fv.back() = fc;
      continue;
    }
    for (std::size_t i = 1; i < simplex.size() && trace.size() < cap; ++i) {
      for (std::size_t j = 0; j < d; ++j)
        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
      fv[i] = f(simplex[i]);
    }
  }
  return trace;
}

// Lexicographic order on parameters breaks ties between equal ratios.
bool better(const TraceRow& a, const TraceRow& b, Direction dir) {
  const double va = a.sample->ratio, vb = b.sample->ratio;
  if (va != vb) return dir == Direction::reverse ? va < vb : va > vb;
  return a.params < b.params;
}

Direction direction_of(const std::string& inequality) {
  return inequality.rfind("forward_", 0) == 0 ? Direction::forward : Direction::reverse;
}

bool needs_pair(const std::string& inequality) {
  return inequality == "stein_weiss" || inequality == "reverse_hls";
}

}  // namespace

TrialFamily TrialFamily::exp_decay(double lo, double hi) { return one_param("exp_decay", "c", lo, hi); }
TrialFamily TrialFamily::power_decay(double lo, double hi) { return one_param("power_decay", "s", lo, hi); }
TrialFamily TrialFamily::gaussian(double lo, double hi) { return one_param("gaussian", "c", lo, hi); }
TrialFamily TrialFamily::smooth_bump(double lo, double hi) { return one_param("smooth_bump", "R", lo, hi); }

TrialFamily TrialFamily::by_tag(const std::string& tag) {
  if (tag == "exp_decay") return exp_decay();
  if (tag == "power_decay") return power_decay();
  if (tag == "gaussian") return gaussian();
  if (tag == "smooth_bump") return smooth_bump();
  throw ConfigError("trials::TrialFamily", "unknown family_tag '" + tag + "'");
}

const std::vector<std::string>& family_tags() {
  static const std::vector<std::string> tags{"exp_decay", "power_decay", "gaussian", "smooth_bump"};
  return tags;
}

bool TrialFamily::contains(const std::vector<double>& params) const {
  if (params.size() != param_box.size()) return false;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!(params[i] >= param_box[i].lo && params[i] <= param_box[i].hi)) return false;
  return true;
}

std::vector<double> TrialFamily::center() const {
  std::vector<double> c;
  for (const auto& r : param_box) c.push_back(std::sqrt(r.lo * r.hi));
  return c;
}

void TrialFamily::validate() const {
  const auto& tags = family_tags();
  if (std::find(tags.begin(), tags.end(), family_tag) == tags.end())
    throw ConfigError("trials::TrialFamily", "unknown family_tag '" + family_tag + "'");
  if (param_box.size() != 1)
    throw ConfigError("trials::TrialFamily", family_tag + " takes exactly one parameter");
  for (const auto& r : param_box)
    if (!(r.lo > 0.0) || !(r.hi >= r.lo) || !std::isfinite(r.hi))
      throw ConfigError("trials::TrialFamily",
                        "param_box for " + r.name + " must satisfy 0 < lo <= hi < inf");
}

RadialProfile make_profile(const TrialFamily& family, const std::vector<double>& params) {
  family.validate();
  if (!family.contains(params)) {
    std::string got;
    for (double v : params) got += (got.empty() ? "" : ", ") + fmt(v);
    throw ParameterError("trials::make_profile",
                         "parameters (" + got + ") outside the param_box of " + family.family_tag);
  }
  const double a = params[0];
  const std::string& tag = family.family_tag;
  if (tag == "exp_decay") {
    RadialProfile f([a](double r) { return std::exp(-a * r); },
                    [a](double r) { return -a * std::exp(-a * r); }, tag, params);
    f.with_scale(1.0 / a).with_decreasing(true);
    return f;
  }
  if (tag == "power_decay") {
    RadialProfile f([a](double r) { return std::pow(1.0 + r, -a); },
                    [a](double r) { return -a * std::pow(1.0 + r, -a - 1.0); }, tag, params);
    f.with_scale(1.0).with_decreasing(true);
    return f;
  }
  if (tag == "gaussian") {
    RadialProfile f([a](double r) { return std::exp(-a * r * r); },
                    [a](double r) { return -2.0 * a * r * std::exp(-a * r * r); }, tag, params);
    f.with_scale(1.0 / std::sqrt(a)).with_decreasing(true);
    return f;
  }
  // smooth_bump, normalized to 1 at the origin.
  const double R = a;
  RadialProfile f(
      [R](double r) {
        const double t = r / R;
        return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
      },
      [R](double r) {
        const double t = r / R;
        if (t >= 1.0) return 0.0;
        const double w = 1.0 - t * t;
        return std::exp(1.0 - 1.0 / w) * (-2.0 * t / (w * w)) / R;
      },
      tag, params);
  f.with_support(R).with_scale(R / 2.0).with_decreasing(true);
  return f;
}

std::string to_string(SearchMethod m) { return m == SearchMethod::grid ? "grid" : "nelder_mead"; }

SearchMethod parse_search_method(const std::string& name) {
  if (name == "grid") return SearchMethod::grid;
  if (name == "nelder_mead" || name == "simplex") return SearchMethod::nelder_mead;
  throw ConfigError("trials::SearchSpec", "unknown search method '" + name + "'");
}

void SearchSpec::validate() const {
  if (budget < 1) throw ConfigError("trials::SearchSpec", "budget must be >= 1");
  if (restarts < 1) throw ConfigError("trials::SearchSpec", "restarts must be >= 1");
}

bool EstimateRecord::consistent() const {
  const double tol = 3.0 * std::hypot(stderr_estimate, constant_stderr) + kMarginFloor;
  return direction == Direction::reverse ? estimate >= constant - tol : estimate <= constant + tol;
}

EstimateRecord optimize_ratio(const RatioObjective& objective, const std::vector<ParamRange>& box,
                              Direction direction, const SearchSpec& search) {
  search.validate();
  if (box.empty() || box.size() > std::size(kPrimes))
    throw ParameterError("trials::optimize_ratio", "search dimension must lie in [1, 8]");
  for (const auto& r : box)
    if (!(r.lo > 0.0) || !(r.hi >= r.lo))
      throw ParameterError("trials::optimize_ratio", "box for " + r.name + " must satisfy 0 < lo <= hi");
  const LogBox lbox(box);
  const Evaluator eval{objective, lbox, direction};

  EstimateRecord rec;
  rec.direction = direction;
  for (const auto& r : box) rec.param_names.push_back(r.name);

  if (search.method == SearchMethod::grid) {
    // Nested grid: point k has coordinates 0.5 + radical_inverse(k) mod 1 in
    // the log box, so every budget prefix refines the previous one.
    rec.trace.resize(search.budget);
    parallel_for(search.budget, search.threads, [&](std::size_t k) {
      std::vector<double> u(lbox.dim());
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double t = std::fmod(0.5 + radical_inverse(k, kPrimes[i]), 1.0);
        u[i] = lbox.lo[i] + t * (lbox.hi[i] - lbox.lo[i]);
      }
      rec.trace[k] = eval(u, 0).second;
    });
  } else {
    // Each restart runs with the full budget as its cap; the concatenation is
    // truncated afterwards, which keeps the budget-prefix property.
    std::vector<std::vector<TraceRow>> runs(search.restarts);
    parallel_for(search.restarts, search.threads, [&](std::size_t k) {
      std::vector<double> start = lbox.center();
      if (k > 0) {
        Rng rng(stream_seed(search.seed, 0x7e57, k));
        for (std::size_t i = 0; i < start.size(); ++i) start[i] = rng.uniform(lbox.lo[i], lbox.hi[i]);
      }
      runs[k] = nelder_mead_run(eval, start, search.budget, k);
    });
    for (auto& run : runs)
      for (auto& row : run) {
        if (rec.trace.size() >= search.budget) break;
        rec.trace.push_back(std::move(row));
      }
  }

  const TraceRow* best = nullptr;
  for (std::size_t i = 0; i < rec.trace.size(); ++i) {
    auto& row = rec.trace[i];
    row.eval = i;
    if (!row.sample) {
      ++rec.failed;
      continue;
    }
    if (!best || better(row, *best, direction)) best = &row;
  }
  rec.evaluations = rec.trace.size();
  if (!best)
    throw EstimationError("trials::optimize_ratio",
                          "all " + std::to_string(rec.evaluations) +
                              " evaluations failed; first: " + rec.trace.front().status);
  rec.estimate = best->sample->ratio;
  rec.stderr_estimate = best->sample->stderr_estimate;
  rec.argbest = best->params;
  rec.constant = best->sample->constant;
  rec.constant_stderr = best->sample->constant_stderr;
  return rec;
}

VerificationReport run_verifier(const std::string& inequality, const InequalityParams& params,
                                HardyVariant hardy_variant, const RadialProfile& f,
                                const RadialProfile* h, const QuasiNorm& norm,
                                const QuadratureSpec& spec) {
  const char* origin = "trials::run_verifier";
  if (needs_pair(inequality) && !h)
    throw ConfigError(origin, inequality + " needs a second profile h");
  if (inequality == "reverse_integral_hardy") {
    const auto [W, U] = stein_weiss_hardy_weights(hardy_variant, params);
    return verify_reverse_integral_hardy(hardy_variant, W, U, f, params.p, params.q(), norm, spec);
  }
  if (inequality == "stein_weiss") return verify_stein_weiss(f, *h, params, norm, spec);
  if (inequality == "reverse_hls") return verify_reverse_hls(f, *h, params, norm, spec);
  if (inequality == "reverse_hardy") return verify_reverse_hardy(f, params.p, norm, spec);
  if (inequality == "reverse_sobolev") return verify_reverse_sobolev(f, params.p, norm, spec);
  if (inequality == "reverse_ckn")
    return verify_reverse_ckn(f, params.p, params.alpha, params.beta, norm, spec);
  if (inequality == "forward_hardy") return verify_forward_hardy(f, params.p, norm, spec);
  if (inequality == "forward_sobolev") return verify_forward_sobolev(f, params.p, norm, spec);
  if (inequality == "forward_ckn")
    return verify_forward_ckn(f, params.p, params.alpha, params.beta, norm, spec);
  throw ConfigError(origin, "unknown inequality '" + inequality + "'");
}

EstimateRecord estimate_best_constant(const EstimateRequest& req, const QuasiNorm& norm,
                                      const QuadratureSpec& spec, const SearchSpec& search) {
  const char* origin = "trials::estimate_best_constant";
  req.family.validate();
  const bool pair = needs_pair(req.inequality);
  if (pair && !req.second_family) throw ConfigError(origin, req.inequality + " needs a second family");
  if (pair) req.second_family->validate();
  spec.validate();

  std::vector<ParamRange> box = req.family.param_box;
  const std::size_t nf = box.size();
  if (pair) {
    for (auto& r : box) r.name = "f." + r.name;
    for (auto r : req.second_family->param_box) {
      r.name = "h." + r.name;
      box.push_back(r);
    }
  }
  // ParameterError (including failed preconditions) escapes the evaluator
  // and aborts the search; only numerical failures are skipped.
  auto objective = [&](const std::vector<double>& x) {
    const std::vector<double> xf(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nf));
    const RadialProfile f = make_profile(req.family, xf);
    std::optional<RadialProfile> h;
    if (pair) h = make_profile(*req.second_family, {x.begin() + static_cast<std::ptrdiff_t>(nf), x.end()});
    const VerificationReport rep =
        run_verifier(req.inequality, req.params, req.hardy_variant, f, h ? &*h : nullptr, norm, spec);
    return RatioSample{rep.ratio, rep.ratio_stderr, rep.constant, rep.constant_stderr};
  };
  EstimateRecord rec = optimize_ratio(objective, box, direction_of(req.inequality), search);
  rec.inequality = req.inequality;
  return rec;
}

}  // namespace revineq
