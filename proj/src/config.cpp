#include "revineq/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "revineq/errors.hpp"

namespace revineq {

namespace {

using json = nlohmann::json;
constexpr const char* kOrigin = "cli::parse_config";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  const json& value;
  std::string path;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(kOrigin, "line " + std::to_string(line) + ": key '" + path + "': " + what);
  }
  double number() const {
    if (!value.is_number()) fail("expected a number, got " + value.dump());
    return value.get<double>();
  }
  std::uint64_t count() const {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
      fail("expected a nonnegative integer, got " + value.dump());
    return value.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!value.is_boolean()) fail("expected true or false, got " + value.dump());
    return value.get<bool>();
  }
  std::string string() const {
    if (!value.is_string()) fail("expected a string, got " + value.dump());
    return value.get<std::string>();
  }
  std::vector<double> numbers() const {
    if (!value.is_array()) fail("expected an array of numbers, got " + value.dump());
    std::vector<double> out;
    for (const auto& v : value) {
      if (!v.is_number()) fail("expected an array of numbers, got " + value.dump());
      out.push_back(v.get<double>());
    }
    return out;
  }
  std::vector<std::pair<double, double>> ranges() const {
    std::vector<std::pair<double, double>> out;
    if (!value.is_array()) fail("expected [[lo, hi], ...], got " + value.dump());
    for (const auto& v : value) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail("expected [[lo, hi], ...], got " + value.dump());
      out.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return out;
  }
  // Calls `parse`, re-raising library parse errors with the key path.
  template <class F>
  auto checked(F parse) const {
    try {
      return parse();
    } catch (const Error& e) {
      if (e.origin() == kOrigin) throw;
      fail(e.what());
    }
  }
};

using Setter = std::function<void(RunConfig&, const Entry&)>;

void profile_keys(std::map<std::string, Setter>& t, const std::string& sec, bool is_h) {
  auto prof = [is_h](RunConfig& c) -> ProfileSpec& {
    if (!is_h) return c.f;
    if (!c.h) c.h.emplace();
    return *c.h;
  };
  t[sec + ".family"] = [prof](RunConfig& c, const Entry& e) {
    const std::string tag = e.string();
    if (tag != "indicator") e.checked([&] { return TrialFamily::by_tag(tag); });
    prof(c).family = tag;
  };
  t[sec + ".params"] = [prof](RunConfig& c, const Entry& e) { prof(c).params = e.numbers(); };
  t[sec + ".box"] = [prof](RunConfig& c, const Entry& e) { prof(c).box = e.ranges(); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["run.command"] = [](RunConfig& c, const Entry& e) { c.command = e.string(); };
    t["run.seed"] = [](RunConfig& c, const Entry& e) { c.apply_seed(e.count()); };
    t["run.out"] = [](RunConfig& c, const Entry& e) { c.out_dir = e.string(); };

    t["group.name"] = [](RunConfig& c, const Entry& e) { c.group.name = e.string(); };
    t["group.n"] = [](RunConfig& c, const Entry& e) { c.group.n = e.count(); };
    t["group.weights"] = [](RunConfig& c, const Entry& e) {
      if (!e.value.is_array()) e.fail("expected an array of rationals");
      c.group.weights.clear();
      for (const auto& w : e.value) {
        std::string s = w.is_string() ? w.get<std::string>() : w.is_number() ? w.dump() : "";
        if (s.empty()) e.fail("weights must be strings like \"3/2\" or numbers");
        e.checked([&] { return parse_rational(s); });
        c.group.weights.push_back(s);
      }
    };
    t["norm.kind"] = [](RunConfig& c, const Entry& e) { c.norm.kind = e.string(); };

    t["quadrature.scheme"] = [](RunConfig& c, const Entry& e) {
      c.quadrature.scheme = e.checked([&] { return parse_scheme(e.string()); });
    };
    t["quadrature.sample_count"] = [](RunConfig& c, const Entry& e) { c.quadrature.sample_count = e.count(); };
    t["quadrature.nodes_per_axis"] = [](RunConfig& c, const Entry& e) { c.quadrature.nodes_per_axis = e.count(); };
    t["quadrature.r_min"] = [](RunConfig& c, const Entry& e) { c.quadrature.r_min = e.number(); };
    t["quadrature.r_max"] = [](RunConfig& c, const Entry& e) {
      if (e.value.is_null()) c.quadrature.r_max.reset();
      else c.quadrature.r_max = e.number();
    };
    t["quadrature.threads"] = [](RunConfig& c, const Entry& e) {
      c.quadrature.threads = static_cast<unsigned>(e.count());
    };
    t["quadrature.kernel_log_step"] = [](RunConfig& c, const Entry& e) {
      c.quadrature.kernel_log_step = e.number();
    };

    t["inequality.name"] = [](RunConfig& c, const Entry& e) {
      const std::string name = e.string();
      const auto& names = inequality_names();
      if (std::find(names.begin(), names.end(), name) == names.end())
        e.fail("unknown inequality '" + name + "'");
      c.inequality = name;
    };
    t["inequality.p"] = [](RunConfig& c, const Entry& e) { c.params.p = e.number(); };
    t["inequality.q_prime"] = [](RunConfig& c, const Entry& e) { c.params.q_prime = e.number(); };
    t["inequality.alpha"] = [](RunConfig& c, const Entry& e) { c.params.alpha = e.number(); };
    t["inequality.beta"] = [](RunConfig& c, const Entry& e) { c.params.beta = e.number(); };
    t["inequality.lambda"] = [](RunConfig& c, const Entry& e) { c.params.lambda = e.number(); };
    t["inequality.gamma"] = [](RunConfig& c, const Entry& e) { c.params.gamma_override = e.number(); };
    t["inequality.variant"] = [](RunConfig& c, const Entry& e) {
      c.params.variant = e.checked([&] { return parse_variant(e.string()); });
    };
    t["inequality.hardy_variant"] = [](RunConfig& c, const Entry& e) {
      c.hardy_variant = e.checked([&] { return parse_hardy_variant(e.string()); });
    };

    profile_keys(t, "f", false);
    profile_keys(t, "h", true);

    t["search.method"] = [](RunConfig& c, const Entry& e) {
      c.search.method = e.checked([&] { return parse_search_method(e.string()); });
    };
    t["search.budget"] = [](RunConfig& c, const Entry& e) { c.search.budget = e.count(); };
    t["search.restarts"] = [](RunConfig& c, const Entry& e) { c.search.restarts = e.count(); };
    t["search.threads"] = [](RunConfig& c, const Entry& e) {
      c.search.threads = static_cast<unsigned>(e.count());
    };

    for (const char* key : {"p", "q_prime", "alpha", "beta", "lambda", "gamma"}) {
      t[std::string("sweep.") + key] = [key](RunConfig& c, const Entry& e) {
        auto values = e.numbers();
        if (values.empty()) e.fail("grid must not be empty");
        for (auto& ax : c.sweep.axes)
          if (ax.first == key) {
            ax.second = values;
            return;
          }
        c.sweep.axes.emplace_back(key, std::move(values));
      };
    }
    t["sweep.solve_lambda"] = [](RunConfig& c, const Entry& e) { c.sweep.solve_lambda = e.boolean(); };
    t["sweep.threads"] = [](RunConfig& c, const Entry& e) {
      c.sweep.threads = static_cast<unsigned>(e.count());
    };
    return t;
  }();
  return table;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"verify", "estimate", "sweep", "axioms"};
  return names;
}

nlohmann::ordered_json profile_json(const ProfileSpec& p) {
  nlohmann::ordered_json j;
  j["family"] = p.family;
  j["params"] = p.params;
  if (p.box) {
    auto& b = j["box"] = nlohmann::ordered_json::array();
    for (auto [lo, hi] : *p.box) b.push_back({lo, hi});
  }
  return j;
}

}  // namespace

TrialFamily ProfileSpec::trial_family() const {
  TrialFamily fam = TrialFamily::by_tag(family);
  if (box) {
    if (box->size() != fam.param_box.size())
      throw ConfigError("cli::ProfileSpec", family + " box needs " +
                                                std::to_string(fam.param_box.size()) + " range(s)");
    for (std::size_t i = 0; i < box->size(); ++i) {
      fam.param_box[i].lo = (*box)[i].first;
      fam.param_box[i].hi = (*box)[i].second;
    }
    fam.validate();
  }
  return fam;
}

void RunConfig::apply_seed(std::uint64_t s) {
  seed = s;
  quadrature.seed = s;
  search.seed = s;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  std::size_t line_no = 0;
  const auto& table = setters();
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    auto fail = [&](const std::string& what) {
      throw ConfigError(kOrigin, "line " + std::to_string(line_no) + ": " + what);
    };
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string path = section.empty() ? key : section + "." + key;
    if (key.empty()) fail("missing key before '='");
    const auto it = table.find(path);
    if (it == table.end()) fail("unknown key '" + path + "'");
    json value;
    try {
      value = json::parse(trim(line.substr(eq + 1)));
    } catch (const json::parse_error&) {
      fail("key '" + path + "': value is not valid JSON: " + trim(line.substr(eq + 1)));
    }
    it->second(cfg, Entry{value, path, line_no});
  }
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
    throw ConfigError(kOrigin, "key 'run.command': unknown command '" + cfg.command + "'");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cli::load_config", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

HomogeneousGroup make_group(const GroupSpec& spec) {
  const char* origin = "cli::make_group";
  if (spec.name == "abelian") {
    if (!spec.weights.empty()) {
      std::vector<Rational> w;
      for (const auto& s : spec.weights) w.push_back(parse_rational(s));
      return HomogeneousGroup::abelian(std::move(w));
    }
    if (spec.n < 1) throw ConfigError(origin, "key 'group.n': must be >= 1");
    return HomogeneousGroup::abelian(spec.n);
  }
  if (!spec.weights.empty())
    throw ConfigError(origin, "key 'group.weights': only abelian groups take explicit weights");
  if (spec.name == "heisenberg") {
    if (spec.n < 1) throw ConfigError(origin, "key 'group.n': must be >= 1");
    return HomogeneousGroup::heisenberg(spec.n);
  }
  if (spec.name == "engel") return HomogeneousGroup::engel();
  throw ConfigError(origin, "key 'group.name': unknown group '" + spec.name + "'");
}

QuasiNorm make_norm(const NormSpec& spec, const HomogeneousGroup& group) {
  try {
    if (spec.kind == "euclidean") return QuasiNorm::euclidean(group);
    if (spec.kind == "anisotropic") return QuasiNorm::anisotropic(group);
    if (spec.kind == "koranyi") return QuasiNorm::koranyi(group);
    if (spec.kind == "cygan") return QuasiNorm::cygan(group);
  } catch (const Error& e) {
    throw ConfigError("cli::make_norm", std::string("key 'norm.kind': ") + e.what());
  }
  throw ConfigError("cli::make_norm", "key 'norm.kind': unknown norm '" + spec.kind + "'");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["run"] = {{"command", c.command}, {"seed", c.seed}};
  j["group"] = {{"name", c.group.name}, {"n", c.group.n}, {"weights", c.group.weights}};
  j["norm"] = {{"kind", c.norm.kind}};
  const auto& q = c.quadrature;
  j["quadrature"] = {{"scheme", to_string(q.scheme)},
                     {"sample_count", q.sample_count},
                     {"nodes_per_axis", q.nodes_per_axis},
                     {"r_min", q.r_min},
                     {"r_max", q.r_max ? nlohmann::ordered_json(*q.r_max) : nlohmann::ordered_json()},
                     {"seed", q.seed},
                     {"kernel_log_step", q.kernel_log_step}};
  const auto& p = c.params;
  j["inequality"] = {{"name", c.inequality},
                     {"Q", p.Q},
                     {"p", p.p},
                     {"q_prime", p.q_prime},
                     {"alpha", p.alpha},
                     {"beta", p.beta},
                     {"lambda", p.lambda},
                     {"gamma", p.gamma()},
                     {"variant", to_string(p.variant)},
                     {"hardy_variant", to_string(c.hardy_variant)}};
  j["f"] = profile_json(c.f);
  if (c.h) j["h"] = profile_json(*c.h);
  j["search"] = {{"method", to_string(c.search.method)},
                 {"budget", c.search.budget},
                 {"restarts", c.search.restarts},
                 {"seed", c.search.seed}};
  if (!c.sweep.axes.empty()) {
    nlohmann::ordered_json s;
    for (const auto& [k, v] : c.sweep.axes) s[k] = v;
    s["solve_lambda"] = c.sweep.solve_lambda;
    j["sweep"] = s;
  }
  return j;
}

}  // namespace revineq
