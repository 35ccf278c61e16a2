#pragma once

#include <cstdint>
#include <string>

#include "epictrl/dynamics.hpp"
#include "epictrl/rate_model.hpp"

namespace epictrl {

// One scenario parsed from an INI-style config file.
struct ScenarioConfig {
  std::string name;
  RateModel rate;
  double gamma{};
  double x0{};
  double y0{};
  double ybar{};
  IntegratorConfig integrator;
  std::uint64_t seed = 42;
  // Number of uncontrolled orbits to emit alongside the curve export; 0 means
  // a plain simulation scenario.
  int orbit_fan = 0;
  // "standard" or "counterexample" (the latter runs the cost-ordering check
  // instead of the invariant suite).
  std::string verify_mode = "standard";

  ModelInstance model() const { return ModelInstance(rate, gamma); }
  EpidemicState initial_state() const { return {x0, y0}; }
};

// Parses a scenario file. Throws ConfigError with a line-level message.
ScenarioConfig load_scenario(const std::string& path);

// Resolves a scenario name to a bundled config file, searching
// EPICTRL_SCENARIO_DIR, then share/epictrl/scenarios next to the executable,
// then the source-tree scenarios directory relative to the build tree.
// exe_path is argv[0]. Throws ConfigError when nothing matches.
std::string resolve_scenario(const std::string& name, const std::string& exe_path);

// Open-loop control file: CSV rows t_start,u (right-continuous).
ControlSignal load_control_file(const std::string& path);

}  // namespace epictrl
