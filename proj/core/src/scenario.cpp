#include "epictrl/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "epictrl/errors.hpp"

namespace fs = std::filesystem;

namespace epictrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct IniData {
  std::string path;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError(path + ": missing required key '" + key + "'");
    return it->second;
  }

  double num(const std::string& key) const { return parse_num(key, required(key)); }

  double num(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_num(key, it->second);
  }

  double parse_num(const std::string& key, const std::string& text) const {
    try {
      std::size_t pos = 0;
      double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(path + ": key '" + key + "' has non-numeric value '" + text + "'");
    }
  }
};

IniData parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  IniData data;
  data.path = path;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    data.kv[section + "." + key] = value;
  }
  return data;
}

RateModel build_rate(const IniData& ini) {
  std::string family = ini.required("model.family");
  if (family == "constant") {
    BSpec b = BSpec::parse(ini.required("model.b"));
    if (b.coeffs.size() != 1)
      throw ConfigError(ini.path + ": constant family needs a single-coefficient b");
    return constant_rate(b.coeffs[0]);
  }
  if (family == "saturating")
    return saturating_rate(BSpec::parse(ini.required("model.b")), ini.num("model.a"));
  if (family == "linear_damped")
    return linear_damped_rate(BSpec::parse(ini.required("model.b")), ini.num("model.a"));
  if (family == "infected_driven") return infected_driven_rate(ini.num("model.c"));
  throw ConfigError(ini.path + ": unknown model family '" + family + "'");
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  IniData ini = parse_ini(path);
  ScenarioConfig sc;
  sc.name = ini.str("scenario.name", fs::path(path).stem().string());
  sc.verify_mode = ini.str("scenario.verify_mode", "standard");
  if (sc.verify_mode != "standard" && sc.verify_mode != "counterexample")
    throw ConfigError(path + ": verify_mode must be 'standard' or 'counterexample'");
  sc.seed = static_cast<std::uint64_t>(ini.num("scenario.seed", 42));
  sc.orbit_fan = static_cast<int>(ini.num("scenario.orbit_fan", 0));

  sc.rate = build_rate(ini);
  sc.gamma = ini.num("model.gamma");
  if (!(sc.gamma > 0.0)) throw ConfigError(path + ": gamma must be strictly positive");

  sc.x0 = ini.num("run.x0");
  sc.y0 = ini.num("run.y0");
  sc.ybar = ini.num("run.ybar");
  if (!in_simplex({sc.x0, sc.y0}))
    throw ConfigError(path + ": initial state outside the state space");
  if (!(sc.ybar > 0.0 && sc.ybar < 1.0))
    throw ConfigError(path + ": ybar must lie in (0, 1)");

  sc.integrator.step = ini.num("integrator.step", sc.integrator.step);
  if (!(sc.integrator.step > 0.0)) throw ConfigError(path + ": step must be positive");
  sc.integrator.event_bisection_tol =
      ini.num("integrator.event_bisection_tol", sc.integrator.event_bisection_tol);
  sc.integrator.extinction_eps =
      ini.num("integrator.extinction_eps", sc.integrator.extinction_eps);
  sc.integrator.max_time = ini.num("integrator.max_time", sc.integrator.max_time);
  return sc;
}

std::string resolve_scenario(const std::string& name, const std::string& exe_path) {
  std::error_code ec;
  bool looks_like_path = name.find('/') != std::string::npos ||
                         (name.size() > 4 && name.substr(name.size() - 4) == ".ini");
  if (looks_like_path) {
    if (fs::exists(name, ec)) return name;
    throw ConfigError("config file '" + name + "' not found");
  }

  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("EPICTRL_SCENARIO_DIR"))
    candidates.push_back(fs::path(env) / (name + ".ini"));
  fs::path exe_dir = fs::absolute(fs::path(exe_path), ec).parent_path();
  if (!exe_dir.empty()) {
    candidates.push_back(exe_dir / ".." / "share" / "epictrl" / "scenarios" / (name + ".ini"));
    candidates.push_back(exe_dir / ".." / ".." / "scenarios" / (name + ".ini"));
    candidates.push_back(exe_dir / "scenarios" / (name + ".ini"));
  }
  candidates.push_back(fs::path("scenarios") / (name + ".ini"));
  for (const auto& c : candidates)
    if (fs::exists(c, ec)) return c.string();
  throw ConfigError("unknown scenario '" + name + "' (set EPICTRL_SCENARIO_DIR or pass a path)");
}

ControlSignal load_control_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open control file '" + path + "'");
  std::vector<double> times;
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t cut = line.find('#');
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string t_str, u_str;
    if (!std::getline(ss, t_str, ',') || !std::getline(ss, u_str))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 't,u'");
    try {
      std::size_t p1 = 0, p2 = 0;
      double t = std::stod(trim(t_str), &p1);
      double u = std::stod(trim(u_str), &p2);
      times.push_back(t);
      values.push_back(u);
    } catch (const std::exception&) {
      if (lineno == 1 && times.empty()) continue;  // header row
      throw ConfigError(path + ":" + std::to_string(lineno) + ": non-numeric row");
    }
  }
  if (times.empty()) throw ConfigError(path + ": no control rows");
  try {
    return ControlSignal::open_loop(std::move(times), std::move(values));
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace epictrl
