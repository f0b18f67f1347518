#include "revineq/report.hpp"

#include <charconv>
#include <cmath>

namespace revineq {

namespace {

using ojson = nlohmann::ordered_json;

// JSON has no inf/nan; those become strings so reports stay valid JSON.
ojson num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ojson to_json(const VerificationReport& r) {
  ojson j;
  j["inequality"] = r.inequality;
  j["direction"] = r.direction == Direction::reverse ? "reverse" : "forward";
  j["group"] = r.group_name;
  j["norm"] = r.norm_name;
  j["profiles"] = r.profiles;
  j["params"] = {{"Q", num(r.params.Q)},         {"p", num(r.params.p)},
                 {"q_prime", num(r.params.q_prime)}, {"alpha", num(r.params.alpha)},
                 {"beta", num(r.params.beta)},   {"lambda", num(r.params.lambda)},
                 {"gamma", num(r.params.gamma())}, {"variant", to_string(r.params.variant)}};
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["ratio"] = num(r.ratio);
  j["ratio_stderr"] = num(r.ratio_stderr);
  j["constant"] = num(r.constant);
  j["constant_stderr"] = num(r.constant_stderr);
  j["margin"] = num(r.margin());
  j["tolerance"] = num(r.tolerance());
  j["pass"] = r.pass();
  j["sphere_measure"] = {{"value", num(r.sphere)}, {"stderr", num(r.sphere_stderr)}};
  j["samples"] = r.samples;
  ojson extras = ojson::object();
  for (const auto& [k, v] : r.extras) extras[k] = num(v);
  j["extras"] = extras;
  j["notes"] = r.notes;
  return j;
}

ojson to_json(const EstimateRecord& e) {
  ojson j;
  j["inequality"] = e.inequality;
  j["direction"] = e.direction == Direction::reverse ? "reverse" : "forward";
  j["estimate_kind"] = e.direction == Direction::reverse ? "minimum ratio" : "maximum ratio";
  j["estimate"] = num(e.estimate);
  j["stderr"] = num(e.stderr_estimate);
  ojson arg = ojson::object();
  for (std::size_t i = 0; i < e.param_names.size() && i < e.argbest.size(); ++i)
    arg[e.param_names[i]] = num(e.argbest[i]);
  j["argbest"] = arg;
  j["constant"] = num(e.constant);
  j["constant_stderr"] = num(e.constant_stderr);
  j["consistent_with_constant"] = e.consistent();
  j["evaluations"] = e.evaluations;
  j["failed_evaluations"] = e.failed;
  return j;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "inequality", "Q",     "p",     "q_prime",  "alpha",  "beta", "lambda", "gamma",
      "lhs",        "rhs",   "ratio", "constant", "margin", "stderr", "pass", "status"};
  return cols;
}

void write_csv_header(std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, const SweepRow& row) {
  const auto& p = row.params;
  out << csv_escape(row.inequality) << ',' << format_double(p.Q) << ',' << format_double(p.p)
      << ',' << format_double(p.q_prime) << ',' << format_double(p.alpha) << ','
      << format_double(p.beta) << ',' << format_double(p.lambda) << ','
      << format_double(p.gamma()) << ',';
  if (row.report) {
    const auto& r = *row.report;
    out << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio)
        << ',' << format_double(r.constant) << ',' << format_double(r.margin()) << ','
        << format_double(r.combined_stderr()) << ',' << (r.pass() ? "true" : "false");
  } else {
    out << ",,,,,,";
  }
  out << ',' << csv_escape(row.status) << '\n';
}

void write_trace_csv(std::ostream& out, const EstimateRecord& e) {
  out << "eval,restart";
  for (const auto& n : e.param_names) out << ',' << csv_escape(n);
  out << ",ratio,stderr,constant,status\n";
  for (const auto& row : e.trace) {
    out << row.eval << ',' << row.restart;
    for (double v : row.params) out << ',' << format_double(v);
    if (row.sample)
      out << ',' << format_double(row.sample->ratio) << ','
          << format_double(row.sample->stderr_estimate) << ','
          << format_double(row.sample->constant);
    else
      out << ",,,";
    out << ',' << csv_escape(row.status) << '\n';
  }
}

}  // namespace revineq
