#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epictrl/controller.hpp"
#include "epictrl/dynamics.hpp"
#include "epictrl/errors.hpp"
#include "epictrl/geometry.hpp"
#include "epictrl/io.hpp"
#include "epictrl/parallel.hpp"
#include "epictrl/scenario.hpp"
#include "epictrl/verification.hpp"

namespace fs = std::filesystem;
using namespace epictrl;

namespace {

ScenarioConfig load_from_args(const std::string& scenario, const std::string& config,
                              const char* argv0) {
  if (!config.empty()) return load_scenario(config);
  if (scenario.empty()) throw ConfigError("pass --scenario <name> or --config <path>");
  return load_scenario(resolve_scenario(scenario, argv0));
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw Error("cannot open '" + p.string() + "' for writing");
  return os;
}

void write_orbit_fan(const ScenarioConfig& sc, const ModelInstance& m, const fs::path& dir) {
  IntegratorConfig cfg = sc.integrator;
  for (int i = 0; i < sc.orbit_fan; ++i) {
    double frac = sc.orbit_fan == 1 ? 0.5 : static_cast<double>(i) / (sc.orbit_fan - 1);
    double x0 = (0.05 + 0.93 * frac) * (1.0 - sc.y0);
    Trajectory tr = simulate(m, ControlSignal::zero(), {x0, sc.y0}, cfg,
                             StopCondition::at_time(std::min(400.0, cfg.max_time)));
    char name[32];
    std::snprintf(name, sizeof name, "orbit_%02d.csv", i);
    auto os = open_out(dir / name);
    os << "t,x,y\n";
    std::size_t stride = std::max<std::size_t>(1, tr.size() / 4000);
    for (std::size_t k = 0; k < tr.size(); k += stride)
      os << fmt12(tr.times[k]) << ',' << fmt12(tr.states[k].x) << ','
         << fmt12(tr.states[k].y) << '\n';
    if ((tr.size() - 1) % stride != 0)
      os << fmt12(tr.final_time()) << ',' << fmt12(tr.final_state().x) << ','
         << fmt12(tr.final_state().y) << '\n';
  }
}

int cmd_simulate(const ScenarioConfig& sc, const std::string& control, const std::string& out) {
  fs::create_directories(out);
  ModelInstance m = sc.model();
  GeometryCache g = make_geometry(m, sc.ybar);
  EpidemicState s0 = sc.initial_state();

  FillingTheBoxRun run;
  std::string regime =
      g.trivial_regime ? "trivial" : region_label_name(classify(g, s0));
  int rc = 0;

  if (control == "ftb") {
    run = g.trivial_regime ? run_filling_the_box_direct(m, sc.ybar, s0, sc.integrator)
                           : run_filling_the_box(g, s0, sc.integrator);
    if (g.trivial_regime && run.intervened) regime = "direct";
    if (g.trivial_regime && !run.intervened) rc = 3;
  } else if (control == "zero") {
    run.trajectory =
        simulate(m, ControlSignal::zero(), s0, sc.integrator, StopCondition::extinction());
    run.control = ControlSignal::zero();
  } else if (control.rfind("file:", 0) == 0) {
    ControlSignal sig = load_control_file(control.substr(5));
    run.trajectory = simulate(m, sig, s0, sc.integrator, StopCondition::extinction());
    run.cost = cost_J(run.trajectory);
    run.control = std::move(sig);
    run.intervened = true;
  } else {
    throw ConfigError("unknown control '" + control + "' (zero | ftb | file:<path>)");
  }

  bool feasible = run.trajectory.max_y() <= sc.ybar + 1e-8;
  { auto os = open_out(fs::path(out) / "trajectory.csv"); write_trajectory_csv(os, run.trajectory); }
  { auto os = open_out(fs::path(out) / "summary.json"); write_run_summary_json(os, run, regime, feasible); }
  if (!g.trivial_regime) {
    auto os = open_out(fs::path(out) / "curves.csv");
    write_curves_csv(os, g);
  }
  if (sc.orbit_fan > 0) write_orbit_fan(sc, m, out);

  std::cout << sc.name << ": " << regime << (run.intervened ? ", intervened" : "")
            << ", cost " << fmt12(run.cost) << ", peak y "
            << fmt12(run.trajectory.max_y()) << "\n";
  return rc;
}

int cmd_verify(const ScenarioConfig& sc, int alts, std::uint64_t seed, double tol_opt,
               const std::string& out) {
  ModelInstance m = sc.model();
  if (sc.verify_mode == "counterexample") {
    CounterexampleResult r = run_counterexample();
    std::cout << "recovery rate " << fmt12(r.gamma) << "\n";
    std::cout << "cost at threshold 0.11:  " << fmt12(r.cost_low) << "\n";
    std::cout << "cost at threshold 0.154: " << fmt12(r.cost_high) << "\n";
    std::cout << (r.ordering_violated ? "[PASS] " : "[FAIL] ")
              << "raising the threshold raises the cost (monotonicity fails)\n";
    return r.ordering_violated ? 0 : 1;
  }

  GeometryCache g = make_geometry(m, sc.ybar);
  if (g.trivial_regime) {
    std::cout << sc.name << ": trivial regime, nothing to verify\n";
    return 3;
  }
  auto checks = run_invariant_suite(g, sc.initial_state(), sc.integrator, alts, seed, tol_opt);
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    std::printf("[%s] %-24s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.note.c_str());
  }
  if (!out.empty()) {
    fs::create_directories(out);
    auto fam = AlternativePolicyFamily::random_piecewise(seed, alts);
    OptimalityReport report = sweep_alternatives(g, sc.initial_state(), fam, sc.integrator);
    report.scenario = sc.name;
    auto os = open_out(fs::path(out) / "report.json");
    write_report_json(os, report);
  }
  std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? 0 : 1;
}

int cmd_value_map(const ScenarioConfig& sc, int resolution, const std::string& out) {
  ModelInstance m = sc.model();
  GeometryCache g = make_geometry(m, sc.ybar);
  if (g.trivial_regime) {
    std::cout << sc.name << ": trivial regime, value map undefined\n";
    return 3;
  }
  fs::create_directories(out);

  std::vector<EpidemicState> pts;
  for (int j = 0; j <= resolution; ++j) {
    double y = g.ybar * static_cast<double>(j) / resolution;
    for (int i = 0; i <= resolution; ++i) {
      double x = static_cast<double>(i) / resolution;
      if (x + y <= 1.0 + 1e-12) pts.push_back({x, std::min(y, 1.0 - x)});
    }
  }
  std::vector<ValueQuery> vals(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int k) {
    vals[k] = value_function(g, pts[k], sc.integrator);
  });

  auto os = open_out(fs::path(out) / "value_map.csv");
  os << "x,y,V,region\n";
  for (const auto& q : vals)
    os << fmt12(q.state.x) << ',' << fmt12(q.state.y) << ',' << fmt12(q.value) << ','
       << region_label_name(q.region) << '\n';
  { auto cs = open_out(fs::path(out) / "curves.csv"); write_curves_csv(cs, g); }
  std::cout << sc.name << ": " << pts.size() << " grid points\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold-riding epidemic control: simulate, verify, map the value function"};
  app.require_subcommand(1);

  std::string scenario, config, out, control = "ftb";
  int alts = 200, resolution = 100;
  std::int64_t seed = -1;
  double tol_opt = 1e-3;

  auto add_scenario_opts = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "bundled scenario name");
    cmd->add_option("--config", config, "path to a scenario config file");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one control strategy, export the trajectory");
  add_scenario_opts(sim);
  sim->add_option("--control", control, "zero | ftb | file:<path>");
  sim->add_option("--out", out, "output directory")->required();

  CLI::App* ver = app.add_subcommand("verify", "run the invariant and optimality checks");
  add_scenario_opts(ver);
  ver->add_option("--alts", alts, "random alternative signals per sweep");
  ver->add_option("--seed", seed, "override the scenario seed");
  ver->add_option("--tol-opt", tol_opt, "optimality slack");
  ver->add_option("--out", out, "also write report.json here");

  CLI::App* map = app.add_subcommand("value-map", "tabulate the minimal-effort value function");
  add_scenario_opts(map);
  map->add_option("--resolution", resolution, "grid points per axis");
  map->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ScenarioConfig sc = load_from_args(scenario, config, argv[0]);
    std::uint64_t use_seed = seed < 0 ? sc.seed : static_cast<std::uint64_t>(seed);
    if (sim->parsed()) return cmd_simulate(sc, control, out);
    if (ver->parsed()) return cmd_verify(sc, alts, use_seed, tol_opt, out);
    if (map->parsed()) return cmd_value_map(sc, resolution, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleStart& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
