#include "curvlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(int line, const std::string& v) {
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) fail(line, "malformed number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "malformed number '" + v + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

bool is_metric_expr_key(const std::string& key) {
  static const char* keys[] = {"g11", "g12", "g13", "g22", "g23", "g33",
                               "f1",  "f2",  "gv11", "gv12", "gv22", "f"};
  for (const char* k : keys)
    if (key == k) return true;
  return false;
}

}  // namespace

CampaignConfig parse_campaign_config(const std::string& text) {
  CampaignConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  bool seen_tol = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "metric" && section != "potential" &&
          section != "check" && section != "output")
        fail(line_no, "unknown section '" + section + "'");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");
    for (auto& ch : key) ch = char(std::tolower(ch));

    if (section == "metric") {
      if (key == "family") cfg.family = value;
      else if (key == "m") cfg.m = to_double(line_no, value);
      else if (key == "a") cfg.a = to_double(line_no, value);
      else if (is_metric_expr_key(key)) cfg.metric_exprs[key] = value;
      else fail(line_no, "unknown metric key '" + key + "'");
    } else if (section == "potential") {
      if (key == "kind") cfg.potential_kind = value;
      else if (key == "omega") cfg.omega_expr = value;
      else if (key == "alpha") cfg.alpha = to_double(line_no, value);
      else if (key == "c") cfg.c = to_double(line_no, value);
      else if (key == "tau_scale") cfg.tau_scale = to_double(line_no, value);
      else fail(line_no, "unknown potential key '" + key + "'");
    } else if (section == "check") {
      if (key == "systems") {
        for (const auto& name : split(value, ',')) {
          try {
            cfg.systems.push_back(system_from_name(name));
          } catch (const ConfigError& e) {
            fail(line_no, e.what());
          }
        }
      } else if (key == "point") {
        auto parts = split(value, ' ');
        if (parts.empty() || parts.size() > 3)
          fail(line_no, "a point needs 1 to 3 coordinates");
        Point p{0.0, 0.0, 0.0};
        for (size_t i = 0; i < parts.size(); ++i)
          p[i] = to_double(line_no, parts[i]);
        cfg.points.push_back(p);
      } else if (key == "tol") {
        cfg.tol = to_double(line_no, value);
        seen_tol = true;
      } else {
        fail(line_no, "unknown check key '" + key + "'");
      }
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else if (key == "seed") cfg.seed = std::uint64_t(to_double(line_no, value));
      else fail(line_no, "unknown output key '" + key + "'");
    } else {
      fail(line_no, "key outside any section");
    }
  }
  if (seen_tol && !(cfg.tol > 0.0))
    throw ConfigError("tolerance must be positive");
  return cfg;
}

CampaignConfig load_campaign_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_campaign_config(text.str());
}

namespace {

ExprPtr parse_component(const CampaignConfig& cfg, const std::string& key,
                        bool required, const char* fallback = nullptr) {
  auto it = cfg.metric_exprs.find(key);
  if (it == cfg.metric_exprs.end()) {
    if (required)
      throw ConfigError("metric family '" + cfg.family +
                        "' needs component '" + key + "'");
    return fallback ? parse(fallback) : nullptr;
  }
  try {
    return parse(it->second);
  } catch (const ParseError& e) {
    throw ConfigError("component " + key + ": " + e.what() + " (line " +
                      std::to_string(e.line) + ", column " +
                      std::to_string(e.col) + ")");
  }
}

}  // namespace

Campaign build_campaign(const CampaignConfig& cfg) {
  Campaign out;
  out.systems = cfg.systems;
  out.points = cfg.points;
  out.tol = cfg.tol;
  if (!(cfg.tol > 0.0)) throw ConfigError("tolerance must be positive");

  if (cfg.family == "schwarzschild") {
    out.chart = schwarzschild_chart(cfg.m);
  } else if (cfg.family == "kasner") {
    out.chart = kasner_chart(cfg.a);
  } else if (cfg.family == "flat-torus") {
    out.chart = flat_torus_chart();
  } else if (cfg.family == "warped") {
    // sequence the parses so error reports are deterministic
    ExprPtr f1 = parse_component(cfg, "f1", true);
    ExprPtr f2 = parse_component(cfg, "f2", true);
    out.chart = warped_chart(std::move(f1), std::move(f2));
  } else if (cfg.family == "diagonal") {
    ExprPtr g11 = parse_component(cfg, "g11", true);
    ExprPtr g22 = parse_component(cfg, "g22", true);
    ExprPtr g33 = parse_component(cfg, "g33", true);
    out.chart = diagonal_chart(std::move(g11), std::move(g22), std::move(g33));
  } else if (cfg.family == "s1-invariant") {
    MetricChart base(2, "config-base");
    base.set_component(0, 0, parse_component(cfg, "gv11", false, "1"));
    base.set_component(0, 1, parse_component(cfg, "gv12", false, "0"));
    base.set_component(1, 1, parse_component(cfg, "gv22", false, "1"));
    out.chart = s1_invariant_chart(base, parse_component(cfg, "f", true));
  } else if (cfg.family == "inline") {
    MetricChart chart(3, "config-inline");
    static const char* diag_default = "1";
    static const char* off_default = "0";
    const char* keys[6] = {"g11", "g12", "g13", "g22", "g23", "g33"};
    int pos = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const char* fallback = (i == j) ? diag_default : off_default;
        chart.set_component(i, j,
                            parse_component(cfg, keys[pos], false, fallback));
        ++pos;
      }
    out.chart = chart;
  } else if (cfg.family.empty()) {
    throw ConfigError("missing [metric] family");
  } else {
    throw ConfigError("unknown metric family '" + cfg.family + "'");
  }
  // expressions may reference the named parameters
  out.chart.params()["m"] = cfg.m;
  out.chart.params()["a"] = cfg.a;
  out.chart.params()["alpha"] = cfg.alpha;
  out.chart.params()["c"] = cfg.c;

  const std::string& kind = cfg.potential_kind;
  if (kind == "none") {
    // nothing
  } else if (kind == "expr") {
    if (cfg.omega_expr.empty())
      throw ConfigError("potential kind 'expr' needs omega = <expression>");
    ExprPtr omega;
    try {
      omega = parse(cfg.omega_expr);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("omega: ") + e.what() + " (line " +
                        std::to_string(e.line) + ", column " +
                        std::to_string(e.col) + ")");
    }
    ParamMap params{{"m", cfg.m}, {"a", cfg.a}, {"alpha", cfg.alpha},
                    {"c", cfg.c}};
    out.potential = PotentialSpec{
        Potential::expression(std::move(omega), std::move(params)), cfg.alpha};
  } else if (kind == "schwarzschild-vacuum") {
    out.potential = PotentialSpec{schwarzschild_vacuum_potential(cfg.m), 0.0};
  } else if (kind == "schwarzschild-rs2") {
    out.potential = PotentialSpec{
        schwarzschild_rs2_potential(cfg.alpha, cfg.m, cfg.c, cfg.tau_scale),
        cfg.alpha};
  } else if (kind == "kasner-vacuum") {
    out.potential =
        PotentialSpec{kasner_potential(cfg.a, cfg.c == 0.0 ? 1.0 : cfg.c), 0.0};
  } else {
    throw ConfigError("unknown potential kind '" + kind + "'");
  }
  return out;
}

}  // namespace curvlab
