#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "revineq/cli.hpp"
#include "revineq/errors.hpp"
#include "revineq/report.hpp"

using namespace revineq;

namespace {

const char* kHardy = R"(# comment
[run]
command = "verify"
seed = 1

[group]
name = "heisenberg"
n = 1

[norm]
kind = "koranyi"

[quadrature]
sample_count = 4000

[inequality]
name = "reverse_hardy"
p = 0.5

[f]
family = "exp_decay"
params = [1.0]
)";

std::string with(const std::string& base, const std::string& extra) { return base + extra; }

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSteinWeiss = R"([run]
command = "verify"
seed = 7

[group]
name = "abelian"
n = 1

[quadrature]
sample_count = 500

[inequality]
name = "stein_weiss"
p = 0.5
q_prime = 0.5
alpha = 0.1
beta = 0.1
lambda = 1.8

[f]
family = "exp_decay"
params = [1.0]

[h]
family = "exp_decay"
params = [1.0]
)";

}  // namespace

TEST_CASE("parse_config reads every section") {
  const auto c = parse_config(kHardy);
  CHECK(c.command == "verify");
  CHECK(c.group.name == "heisenberg");
  CHECK(c.norm.kind == "koranyi");
  CHECK(c.quadrature.sample_count == 4000);
  CHECK(c.inequality == "reverse_hardy");
  CHECK(c.params.p == 0.5);
  CHECK(c.f.family == "exp_decay");
  CHECK(c.f.params == std::vector<double>{1.0});
  CHECK_FALSE(c.h.has_value());

  const auto s = parse_config(with(kHardy, "[run]\nseed = 42\n[search]\nmethod = \"grid\"\n"));
  CHECK(s.seed == 42);
  CHECK(s.quadrature.seed == 42);
  CHECK(s.search.seed == 42);
  CHECK(s.search.method == SearchMethod::grid);

  const auto w = parse_config(with(kHardy, "[group]\nname = \"abelian\"\nweights = [\"1\", \"3/2\"]\n"
                                           "[norm]\nkind = \"anisotropic\"\n"));
  CHECK(make_group(w.group).homogeneous_dimension() == 2.5);
}

TEST_CASE("config errors name the line and the key") {
  CHECK(config_error("[run]\ncommand = \"verify\"\n\n[quadrature]\nsample_cnt = 5000\n")
            .find("line 5: unknown key 'quadrature.sample_cnt'") != std::string::npos);
  CHECK(config_error("[quadrature]\nsample_count = \"many\"\n")
            .find("line 2: key 'quadrature.sample_count'") != std::string::npos);
  CHECK(config_error("[inequality]\np = [0.5\n").find("line 2: key 'inequality.p'") !=
        std::string::npos);
  CHECK(config_error("[run]\ncommand = \"prove\"\n").find("run.command") != std::string::npos);
  CHECK(config_error("[run\n").find("line 1") != std::string::npos);
  CHECK(config_error("[run]\njust words\n").find("line 2") != std::string::npos);
  CHECK(config_error("[search]\nmethod = \"annealing\"\n").find("line 2: key 'search.method'") !=
        std::string::npos);
  CHECK(config_error("[f]\nfamily = \"sinc\"\n").find("line 2: key 'f.family'") !=
        std::string::npos);
  CHECK(config_error("[f]\nbox = [[1, 2, 3]]\n").find("line 2: key 'f.box'") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("group and norm construction from specs") {
  GroupSpec g;
  g.name = "engel";
  CHECK(make_group(g).homogeneous_dimension() == 7.0);
  g.name = "lie";
  CHECK_THROWS_AS(make_group(g), ConfigError);
  NormSpec n;
  n.kind = "koranyi";
  CHECK_THROWS_AS(make_norm(n, make_group(GroupSpec{})), ConfigError);
  n.kind = "taxicab";
  CHECK_THROWS_AS(make_norm(n, make_group(GroupSpec{})), ConfigError);
}

TEST_CASE("verify reproduces the reverse Hardy oracle") {
  const auto res = execute(parse_config(kHardy));
  CHECK(res.exit_status == kExitPass);
  const auto& r = res.report["result"];
  CHECK(r["ratio"].get<double>() == doctest::Approx(oracle::hardy_ratio(4.0, 0.5)).epsilon(1e-8));
  CHECK(r["constant"].get<double>() == doctest::Approx(1.0 / 7.0));
  CHECK(r["pass"].get<bool>());
  CHECK(res.report["config"]["inequality"]["Q"].get<double>() == 4.0);
  CHECK(res.report["exit_status"].get<int>() == 0);
  CHECK_FALSE(res.report.contains("error"));
}

TEST_CASE("identical runs give byte-identical reports") {
  const auto c = parse_config(kSteinWeiss);
  const auto a = execute(c);
  const auto b = execute(c);
  CHECK(a.exit_status == kExitPass);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(a.metadata.contains("timestamp"));
  CHECK(a.metadata.contains("runtime_seconds"));
  CHECK(a.report.dump().find("timestamp") == std::string::npos);

  auto other = c;
  other.apply_seed(8);
  CHECK(execute(other).report.dump(2) != a.report.dump(2));

  // Thread counts do not enter the report.
  auto threaded = c;
  threaded.quadrature.threads = 3;
  CHECK(execute(threaded).report.dump(2) == a.report.dump(2));
}

TEST_CASE("exit statuses") {
  SUBCASE("parameter error") {
    const auto res = execute(parse_config(with(kSteinWeiss, "[inequality]\nlambda = 4\n")));
    CHECK(res.exit_status == kExitConfigError);
    CHECK(res.report["error"]["message"].get<std::string>().find("balance") != std::string::npos);
  }
  SUBCASE("numerical error") {
    const auto res = execute(parse_config(with(kHardy, "[inequality]\nname = \"reverse_sobolev\"\n"
                                                       "[f]\nfamily = \"indicator\"\n")));
    CHECK(res.exit_status == kExitNumericalError);
    CHECK(res.report.contains("error"));
  }
  SUBCASE("margin failure") {
    const auto text = with(kSteinWeiss, "[inequality]\nname = \"reverse_integral_hardy\"\n");
    const auto res = execute(parse_config(text));
    CHECK(res.exit_status == kExitMarginFailure);
    CHECK_FALSE(res.report["result"]["pass"].get<bool>());
  }
  SUBCASE("missing h") {
    auto c = parse_config(kSteinWeiss);
    c.h.reset();
    CHECK(execute(c).exit_status == kExitConfigError);
  }
  CHECK(exit_status_for(ShapeError("x", "y")) == kExitConfigError);
  CHECK(exit_status_for(DivergenceError("x", "y")) == kExitNumericalError);
}

TEST_CASE("sweep skips points that break the balance condition") {
  const auto text = with(kSteinWeiss, "[run]\ncommand = \"sweep\"\n[sweep]\nlambda = [1.8, 6]\n");
  const auto res = execute(parse_config(text));
  CHECK(res.exit_status == kExitPass);
  const auto& r = res.report["result"];
  CHECK(r["points"].get<int>() == 2);
  CHECK(r["passed"].get<int>() == 1);
  CHECK(r["skipped"].get<int>() == 1);
  CHECK(r["rows"][1]["status"].get<std::string>().find("balance condition failed") !=
        std::string::npos);

  std::istringstream csv(res.sweep_csv);
  std::string header, row1, row2;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  std::ostringstream want;
  write_csv_header(want);
  CHECK(header + "\n" == want.str());
  CHECK(header.rfind("inequality,Q,p,q_prime,alpha,beta,lambda", 0) == 0);
  CHECK(row2.find("skipped") != std::string::npos);

  const auto solved = execute(parse_config(with(
      kSteinWeiss, "[run]\ncommand = \"sweep\"\n[sweep]\nalpha = [0, 0.1]\nsolve_lambda = true\n")));
  CHECK(solved.exit_status == kExitPass);
  CHECK(solved.report["result"]["passed"].get<int>() == 2);
}

TEST_CASE("estimate writes a trace") {
  const auto text = with(kHardy, "[run]\ncommand = \"estimate\"\n[search]\nbudget = 6\n");
  const auto res = execute(parse_config(text));
  CHECK(res.exit_status == kExitPass);
  CHECK(res.report["result"]["estimate"].get<double>() ==
        doctest::Approx(oracle::hardy_ratio(4.0, 0.5)).epsilon(1e-7));
  std::istringstream csv(res.trace_csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "eval,restart,c,ratio,stderr,constant,status");
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == res.report["result"]["evaluations"].get<std::size_t>());
  CHECK(rows >= 1);
  CHECK(rows <= 6);
}

TEST_CASE("axioms on the Cygan gauge") {
  const auto text = R"([run]
command = "axioms"
[group]
name = "heisenberg"
[norm]
kind = "cygan"
[quadrature]
sample_count = 20000
)";
  const auto res = execute(parse_config(text));
  CHECK(res.exit_status == kExitPass);
  const auto& r = res.report["result"];
  bool kernel = false;
  for (const auto& c : r["checks"]) {
    CAPTURE(c["check"].get<std::string>());
    CHECK(c["pass"].get<bool>());
    if (c["check"] == "kernel_bounds") kernel = true;
  }
  CHECK(kernel);
  const double S = r["sphere_measure"]["value"].get<double>();
  const double se = r["sphere_measure"]["stderr"].get<double>();
  CHECK(std::abs(S - oracle::cygan_sphere()) <= 3.0 * se);
}

TEST_CASE("run writes report and metadata files") {
  const auto dir = std::filesystem::temp_directory_path() / "revineq_test_cli_run";
  std::filesystem::remove_all(dir);
  auto c = parse_config(kHardy);
  c.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run(c, log) == kExitPass);
  CHECK(log.str().find("PASS") != std::string::npos);
  const std::string first = slurp(dir / "report.json");
  CHECK(std::filesystem::exists(dir / "metadata.json"));
  CHECK(run(c, log) == kExitPass);
  CHECK(slurp(dir / "report.json") == first);
  // Output location is not part of the resolved config.
  c.out_dir = (dir / "elsewhere").string();
  CHECK(run(c, log) == kExitPass);
  CHECK(slurp(dir / "elsewhere" / "report.json") == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(csv_columns().back() == "status");
}
