#include "epictrl/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "epictrl/errors.hpp"
#include "epictrl/numerics.hpp"

namespace epictrl {

double mu(const GeometryCache& g, const EpidemicState& s) {
  if (s.y > g.ybar + kRideTol) throw PreconditionViolated("state above the threshold");
  if (g.ybar - s.y > kRideTol) return 0.0;
  try {
    return std::max(0.0, rho(g.model, {s.x, g.ybar}));
  } catch (const std::domain_error&) {
    return 0.0;  // no infection pressure at all, nothing to suppress
  }
}

namespace {

FillingTheBoxRun uncontrolled_run(const ModelInstance& m, const EpidemicState& s0,
                                  const IntegratorConfig& cfg) {
  FillingTheBoxRun run;
  run.trajectory = simulate(m, ControlSignal::zero(), s0, cfg, StopCondition::extinction());
  run.control = ControlSignal::zero();
  run.cost = cost_J(run.trajectory);
  return run;
}

Trajectory on_threshold_start(const ModelInstance& m, const EpidemicState& s0, double ybar) {
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back({s0.x, ybar});
  tr.controls.push_back(0.0);
  tr.reproduction.push_back(reproduction_number(m, {s0.x, ybar}));
  tr.events.push_back({0.0, EventKind::threshold_hit});
  return tr;
}

// Stitches free spread, the closed-form threshold ride, and the free decay
// after release into one trajectory with its open-loop control record.
FillingTheBoxRun assemble_run(const ModelInstance& m, double ybar, Trajectory phase1,
                              double release_x, const IntegratorConfig& cfg) {
  FillingTheBoxRun run;
  run.T0 = phase1.final_time();
  run.h0 = phase1.final_state().x;
  run.release_x = release_x;
  run.intervened = true;
  double speed = m.gamma * ybar;  // |dx/dt| while riding the threshold
  run.T1 = run.T0 + (run.h0 - release_x) / speed;
  if (run.T1 - run.T0 <= 1e-12) run.T1 = run.T0;

  std::vector<double> node_t{run.T0};
  for (double tk = run.T0 + cfg.step; tk < run.T1 - 1e-12; tk += cfg.step)
    node_t.push_back(tk);
  if (run.T1 > run.T0) node_t.push_back(run.T1);
  auto ride_x = [&](double t) { return run.h0 - speed * (t - run.T0); };

  // Controls are held constant per ride step; the midpoint value keeps the
  // recorded signal's resimulation on the threshold.
  std::vector<double> node_u(node_t.size(), 0.0);
  for (std::size_t k = 0; k + 1 < node_t.size(); k++) {
    double tm = 0.5 * (node_t[k] + node_t[k + 1]);
    node_u[k] = std::max(0.0, rho(m, {ride_x(tm), ybar}));
  }

  Trajectory tr = std::move(phase1);
  tr.states.back() = {run.h0, ybar};
  tr.controls.back() = node_u.empty() ? 0.0 : node_u[0];
  tr.reproduction.back() = reproduction_number(m, {run.h0, ybar});
  for (std::size_t k = 1; k < node_t.size(); k++) {
    EpidemicState sk{k + 1 == node_t.size() ? release_x : ride_x(node_t[k]), ybar};
    tr.times.push_back(node_t[k]);
    tr.states.push_back(sk);
    tr.controls.push_back(node_u[k]);
    tr.reproduction.push_back(reproduction_number(m, sk));
  }
  for (double tk : node_t) tr.control_jumps.push_back(tk);
  if (run.T1 > run.T0) tr.events.push_back({run.T1, EventKind::R_equals_one});

  Trajectory tail = simulate(m, ControlSignal::zero(), {release_x, ybar}, cfg,
                             StopCondition::extinction());
  for (std::size_t k = 1; k < tail.size(); k++) {
    tr.times.push_back(run.T1 + tail.times[k]);
    tr.states.push_back(tail.states[k]);
    tr.controls.push_back(0.0);
    tr.reproduction.push_back(tail.reproduction[k]);
  }
  for (const auto& e : tail.events) tr.events.push_back({run.T1 + e.time, e.kind});

  run.control = ControlSignal::open_loop(node_t, node_u);
  run.trajectory = std::move(tr);
  run.cost = cost_J(run.trajectory);
  return run;
}

}  // namespace

FillingTheBoxRun run_filling_the_box(const GeometryCache& g, const EpidemicState& s0,
                                     const IntegratorConfig& cfg) {
  if (s0.y > g.ybar) throw InfeasibleStart("initial infection level above the threshold");
  RegionLabel label = classify(g, s0);
  if (label != RegionLabel::DPlus) return uncontrolled_run(g.model, s0, cfg);
  Trajectory phase1;
  if (g.ybar - s0.y <= 1e-9) {
    phase1 = on_threshold_start(g.model, s0, g.ybar);
  } else {
    phase1 = simulate(g.model, ControlSignal::zero(), s0, cfg,
                      StopCondition::on_any({EventKind::threshold_hit,
                                             EventKind::infection_extinct}),
                      g.ybar);
    if (!phase1.has_event(EventKind::threshold_hit))
      return uncontrolled_run(g.model, s0, cfg);
  }
  return assemble_run(g.model, g.ybar, std::move(phase1), *g.xbar, cfg);
}

FillingTheBoxRun run_filling_the_box_direct(const ModelInstance& m, double ybar,
                                            const EpidemicState& s0,
                                            const IntegratorConfig& cfg) {
  if (s0.y > ybar) throw InfeasibleStart("initial infection level above the threshold");
  Trajectory phase1;
  if (ybar - s0.y <= 1e-9) {
    phase1 = on_threshold_start(m, s0, ybar);
  } else {
    phase1 = simulate(m, ControlSignal::zero(), s0, cfg,
                      StopCondition::on_any({EventKind::threshold_hit,
                                             EventKind::infection_extinct}),
                      ybar);
    if (!phase1.has_event(EventKind::threshold_hit)) {
      FillingTheBoxRun run;
      run.trajectory = std::move(phase1);
      run.control = ControlSignal::zero();
      run.cost = cost_J(run.trajectory);
      return run;
    }
  }
  double h0 = phase1.final_state().x;
  auto rho_at = [&](double x) { return rho(m, {x, ybar}); };
  double release_x = h0;
  if (rho_at(h0) > 0.0) {
    // walk down from the hit abscissa to bracket the first zero of rho(., ybar)
    double hi = h0;
    double lo = h0;
    bool found = false;
    while (lo > 1e-6) {
      lo = std::max(lo - 1e-3, 1e-6);
      if (rho_at(lo) <= 0.0) {
        found = true;
        break;
      }
      hi = lo;
    }
    if (!found) throw Error("no release point below the hit abscissa");
    release_x = bisect(rho_at, lo, hi, 1e-12);
  }
  return assemble_run(m, ybar, std::move(phase1), release_x, cfg);
}

ValueQuery value_function(const GeometryCache& g, const EpidemicState& s,
                          const IntegratorConfig& cfg) {
  RegionLabel label = g.trivial_regime ? RegionLabel::Trivial : classify(g, s);
  if (label == RegionLabel::AboveThreshold)
    throw PreconditionViolated("value undefined above the threshold");
  if (label != RegionLabel::DPlus) return {s, 0.0, label};
  double h = hitting_abscissa_h(g, s, cfg).h;
  const ModelInstance& m = g.model;
  double ybar = g.ybar;
  auto integrand = [&](double sigma) { return rho(m, {sigma, ybar}); };
  double coarse = composite_simpson(integrand, *g.xbar, h, kValuePanels);
  double fine = composite_simpson(integrand, *g.xbar, h, 2 * kValuePanels);
  double err = (fine - coarse) / 15.0;
  if (std::abs(err) > 1e-8) throw Error("value quadrature failed to converge");
  double v = (fine + err) / (m.gamma * ybar);
  return {s, v, label};
}

VPartials v_partials(const GeometryCache& g, const EpidemicState& s,
                     const IntegratorConfig& cfg) {
  const ModelInstance& m = g.model;
  IntegratorConfig fine = cfg;
  fine.event_bisection_tol = std::min(cfg.event_bisection_tol, 1e-13);
  double scale = 1.0 / (m.gamma * g.ybar);
  double h = hitting_abscissa_h(g, s, fine).h;
  HPartials hp = h_partials(g, s, cfg);
  double rho_h = rho(m, {h, g.ybar});
  VPartials out;
  out.vx = rho_h * hp.hx * scale;
  out.vy = rho_h * hp.hy * scale;

  const double d = kHPartialsStep;
  auto value_at = [&](const EpidemicState& q) {
    ValueQuery vq = value_function(g, q, fine);
    if (vq.region != RegionLabel::DPlus)
      throw PreconditionViolated("finite-difference stencil leaves the intervention region");
    return vq.value;
  };
  auto richardson = [](double a, double b) { return (4.0 * a - b) / 3.0; };
  out.vx_fd = richardson(
      (value_at({s.x + d, s.y}) - value_at({s.x - d, s.y})) / (2.0 * d),
      (value_at({s.x + 2.0 * d, s.y}) - value_at({s.x - 2.0 * d, s.y})) / (4.0 * d));
  if (s.y + 2.0 * d <= g.ybar) {
    out.vy_fd = richardson(
        (value_at({s.x, s.y + d}) - value_at({s.x, s.y - d})) / (2.0 * d),
        (value_at({s.x, s.y + 2.0 * d}) - value_at({s.x, s.y - 2.0 * d})) / (4.0 * d));
  } else {
    double yhi = std::min(s.y + d, g.ybar);
    out.vy_fd = (value_at({s.x, yhi}) - value_at({s.x, s.y - d})) / (yhi - (s.y - d));
  }
  return out;
}

}  // namespace epictrl
