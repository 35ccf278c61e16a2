#include "epictrl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "epictrl/errors.hpp"

namespace epictrl {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::threshold_hit: return "threshold_hit";
    case EventKind::R_equals_one: return "R_equals_one";
    case EventKind::boundary_exit: return "boundary_exit";
    case EventKind::infection_extinct: return "infection_extinct";
  }
  return "unknown";
}

ControlSignal ControlSignal::zero() { return ControlSignal{}; }

ControlSignal ControlSignal::open_loop(std::vector<double> breakpoints,
                                       std::vector<double> values) {
  if (breakpoints.size() != values.size())
    throw Error("open-loop control needs one value per breakpoint");
  for (std::size_t i = 1; i < breakpoints.size(); i++)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw Error("open-loop breakpoints must be strictly increasing");
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0)) throw Error("open-loop control value outside [0, 1]");
  ControlSignal c;
  c.kind = Kind::open_loop_piecewise_constant;
  c.breakpoints = std::move(breakpoints);
  c.values = std::move(values);
  return c;
}

ControlSignal ControlSignal::feedback(
    std::function<double(double, const EpidemicState&)> policy) {
  ControlSignal c;
  c.kind = Kind::feedback;
  c.policy = std::move(policy);
  return c;
}

double ControlSignal::at(double t, const EpidemicState& s) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::open_loop_piecewise_constant: {
      auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
      if (it == breakpoints.begin()) return 0.0;
      return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
    }
    case Kind::feedback: {
      double v = policy(t, s);
      if (v < -1e-12 || v > 1.0 + 1e-12) throw Error("feedback control value outside [0, 1]");
      return std::clamp(v, 0.0, 1.0);
    }
  }
  return 0.0;
}

double Trajectory::max_y() const {
  double m = 0.0;
  for (const auto& s : states) m = std::max(m, s.y);
  return m;
}

bool Trajectory::has_event(EventKind k) const {
  for (const auto& e : events)
    if (e.kind == k) return true;
  return false;
}

std::optional<double> Trajectory::first_event(EventKind k) const {
  for (const auto& e : events)
    if (e.kind == k) return e.time;
  return std::nullopt;
}

StopCondition StopCondition::at_time(double t) {
  StopCondition s;
  s.kind = Kind::at_time;
  s.time = t;
  return s;
}

StopCondition StopCondition::on_event(EventKind k) {
  StopCondition s;
  s.kind = Kind::on_events;
  s.events = {k};
  return s;
}

StopCondition StopCondition::on_any(std::vector<EventKind> kinds) {
  StopCondition s;
  s.kind = Kind::on_events;
  s.events = std::move(kinds);
  return s;
}

StopCondition StopCondition::extinction() { return StopCondition{}; }

namespace {

struct Deriv {
  double dx{};
  double dy{};
};

using RhsFn = std::function<Deriv(const EpidemicState&, double)>;

EpidemicState rk4_raw(const RhsFn& f, const EpidemicState& s, double u, double dt) {
  Deriv k1 = f(s, u);
  Deriv k2 = f({s.x + 0.5 * dt * k1.dx, s.y + 0.5 * dt * k1.dy}, u);
  Deriv k3 = f({s.x + 0.5 * dt * k2.dx, s.y + 0.5 * dt * k2.dy}, u);
  Deriv k4 = f({s.x + dt * k3.dx, s.y + dt * k3.dy}, u);
  return {s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy)};
}

EpidemicState clamp_to_simplex(EpidemicState s) {
  if (s.x < 0.0) s.x = 0.0;
  if (s.y < 0.0) s.y = 0.0;
  double sum = s.x + s.y;
  if (sum > 1.0) {
    s.x /= sum;
    s.y /= sum;
  }
  return s;
}

RhsFn forward_rhs(const ModelInstance& m) {
  return [&m](const EpidemicState& s, double u) -> Deriv {
    double inf = (1.0 - u) * m.rate.beta(s.x, s.y) * s.x * s.y;
    return {-inf, inf - m.gamma * s.y};
  };
}

RhsFn backward_rhs(const ModelInstance& m) {
  return [&m](const EpidemicState& s, double) -> Deriv {
    double inf = m.rate.beta(s.x, s.y) * s.x * s.y;
    return {inf, -inf + m.gamma * s.y};
  };
}

// Direction of a detectable crossing: +1 rising through zero, -1 falling,
// 0 either way.
struct EventSpec {
  EventKind kind{};
  int direction{};
  std::function<double(const EpidemicState&)> value;
};

// Per-event hysteresis: an event fires only while armed, and arms only once
// the value sits beyond tol on the approach side. This both prevents
// re-firing while the state hovers on the surface after a refined hit and
// catches crossings whose bracketing sample happens to land inside the tol
// band.
struct EventRuntime {
  bool armed{};
  int side{};  // sign of the value when armed (used by direction 0)
};

void arm_check(const EventSpec& ev, double e, double tol, EventRuntime& rt) {
  if (rt.armed) return;
  if (ev.direction > 0) {
    rt.armed = e < -tol;
    rt.side = -1;
  } else if (ev.direction < 0) {
    rt.armed = e > tol;
    rt.side = +1;
  } else if (std::abs(e) > tol) {
    rt.armed = true;
    rt.side = e > 0.0 ? +1 : -1;
  }
}

bool fires(const EventSpec& ev, const EventRuntime& rt, double e1) {
  if (!rt.armed) return false;
  if (ev.direction > 0) return e1 >= 0.0;
  if (ev.direction < 0) return e1 <= 0.0;
  return e1 == 0.0 || (e1 > 0.0 ? +1 : -1) != rt.side;
}

struct Refined {
  double dt{};
  EpidemicState state;
};

// Locates the zero of ev along the step from s, each probe being a single
// raw RK4 step of length d from s. sign0 is the approach-side sign of the
// value at d = 0.
Refined refine_event(const RhsFn& f, const EpidemicState& s, double u, double dt,
                     const EventSpec& ev, int sign0, const EpidemicState& s1, double tol) {
  double lo = 0.0, hi = dt;
  bool lo_neg = sign0 < 0;
  Refined best{dt, s1};
  for (int i = 0; i < 200; i++) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    EpidemicState sm = rk4_raw(f, s, u, mid);
    double fm = ev.value(sm);
    best = {mid, sm};
    if (std::abs(fm) <= tol) return best;
    if ((fm < 0.0) == lo_neg) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, dt)) break;
  }
  return best;
}

struct EngineSetup {
  const ModelInstance& model;
  RhsFn rhs;
  const ControlSignal* control;  // null: uncontrolled
  std::vector<EventSpec> events;
};

Trajectory run_engine(const EngineSetup& setup, const EpidemicState& s0,
                      const IntegratorConfig& cfg, const StopCondition& stop) {
  if (!in_simplex(s0)) throw PreconditionViolated("initial state outside the simplex");
  const ControlSignal zero_signal = ControlSignal::zero();
  const ControlSignal& control = setup.control ? *setup.control : zero_signal;
  const bool open_loop = control.kind == ControlSignal::Kind::open_loop_piecewise_constant;
  const double tol = cfg.event_bisection_tol;

  Trajectory tr;
  double t = 0.0;
  EpidemicState s = clamp_to_simplex(s0);
  double u = control.at(t, s);
  auto push = [&](double time, const EpidemicState& state, double uu) {
    tr.times.push_back(time);
    tr.states.push_back(state);
    tr.controls.push_back(uu);
    tr.reproduction.push_back(reproduction_number(setup.model, state));
  };
  push(t, s, u);

  auto stops_on = [&](EventKind k) {
    if (stop.kind == StopCondition::Kind::extinction) return k == EventKind::infection_extinct;
    if (stop.kind == StopCondition::Kind::on_events)
      return std::find(stop.events.begin(), stop.events.end(), k) != stop.events.end();
    return false;
  };

  if (stop.kind == StopCondition::Kind::at_time && stop.time <= 0.0) return tr;
  if (s.y <= cfg.extinction_eps && stops_on(EventKind::infection_extinct)) {
    tr.events.push_back({0.0, EventKind::infection_extinct});
    return tr;
  }

  std::vector<EventRuntime> rt(setup.events.size());
  for (std::size_t i = 0; i < setup.events.size(); i++)
    arm_check(setup.events[i], setup.events[i].value(s), tol, rt[i]);

  for (;;) {
    if (t >= cfg.max_time - 1e-12)
      throw HorizonExceeded("stop condition not reached by max_time");
    double dt = cfg.step;
    double snap_to = -1.0;
    if (open_loop) {
      auto it = std::upper_bound(control.breakpoints.begin(), control.breakpoints.end(), t);
      if (it != control.breakpoints.end() && *it - t <= dt) {
        dt = *it - t;
        snap_to = *it;
      }
    }
    if (stop.kind == StopCondition::Kind::at_time && stop.time - t <= dt) {
      dt = stop.time - t;
      snap_to = stop.time;
    }
    if (cfg.max_time - t < dt) {
      dt = cfg.max_time - t;
      snap_to = cfg.max_time;
    }
    if (dt <= 1e-15) throw Error("integration step collapsed");

    EpidemicState raw = rk4_raw(setup.rhs, s, u, dt);

    int fired = -1;
    double fired_dt = dt;
    EpidemicState fired_state = raw;
    for (std::size_t i = 0; i < setup.events.size(); i++) {
      double e1 = setup.events[i].value(raw);
      if (!fires(setup.events[i], rt[i], e1)) continue;
      Refined r =
          refine_event(setup.rhs, s, u, dt, setup.events[i], rt[i].side, raw, tol);
      if (fired < 0 || r.dt < fired_dt) {
        fired = static_cast<int>(i);
        fired_dt = r.dt;
        fired_state = r.state;
      }
    }
    if (fired >= 0) {
      dt = fired_dt;
      raw = fired_state;
      snap_to = -1.0;
    }

    if (simplex_violation(raw) > 1e-6)
      throw StepRejected("step left the simplex; reduce the step size");
    s = clamp_to_simplex(raw);
    t = (snap_to >= 0.0) ? snap_to : t + dt;

    double u_prev = u;
    u = control.at(t, s);
    push(t, s, u);
    if (open_loop && snap_to >= 0.0 && u != u_prev &&
        std::binary_search(control.breakpoints.begin(), control.breakpoints.end(), t))
      tr.control_jumps.push_back(t);

    if (fired >= 0) rt[static_cast<std::size_t>(fired)].armed = false;
    for (std::size_t i = 0; i < setup.events.size(); i++)
      arm_check(setup.events[i], setup.events[i].value(s), tol, rt[i]);

    if (fired >= 0) {
      EventKind k = setup.events[static_cast<std::size_t>(fired)].kind;
      tr.events.push_back({t, k});
      if (stops_on(k)) return tr;
    }
    if (stop.kind == StopCondition::Kind::at_time && t >= stop.time - 1e-12) return tr;
  }
}

}  // namespace

EpidemicState step(const ModelInstance& m, const EpidemicState& s, double u, double dt) {
  EpidemicState raw = rk4_raw(forward_rhs(m), s, u, dt);
  if (simplex_violation(raw) > 1e-6)
    throw StepRejected("step left the simplex; reduce the step size");
  return clamp_to_simplex(raw);
}

Trajectory simulate(const ModelInstance& m, const ControlSignal& c, const EpidemicState& s0,
                    const IntegratorConfig& cfg, const StopCondition& stop,
                    std::optional<double> threshold) {
  EngineSetup setup{m, forward_rhs(m), &c, {}};
  if (threshold) {
    double yb = *threshold;
    setup.events.push_back({EventKind::threshold_hit, +1,
                            [yb](const EpidemicState& s) { return s.y - yb; }});
  }
  setup.events.push_back({EventKind::R_equals_one, 0, [&m](const EpidemicState& s) {
                            return reproduction_number(m, s) - 1.0;
                          }});
  setup.events.push_back({EventKind::boundary_exit, +1,
                          [](const EpidemicState& s) { return s.x + s.y - 1.0; }});
  setup.events.push_back({EventKind::infection_extinct, -1,
                          [eps = cfg.extinction_eps](const EpidemicState& s) {
                            return s.y - eps;
                          }});
  return run_engine(setup, s0, cfg, stop);
}

Trajectory simulate_backward(const ModelInstance& m, const EpidemicState& s0,
                             const IntegratorConfig& cfg, std::optional<double> stop_time) {
  EngineSetup setup{m, backward_rhs(m), nullptr, {}};
  setup.events.push_back({EventKind::boundary_exit, +1,
                          [](const EpidemicState& s) { return s.x + s.y - 1.0; }});
  setup.events.push_back({EventKind::infection_extinct, -1,
                          [eps = cfg.extinction_eps](const EpidemicState& s) {
                            return s.y - eps;
                          }});
  StopCondition stop =
      stop_time ? StopCondition::at_time(*stop_time)
                : StopCondition::on_any({EventKind::boundary_exit, EventKind::infection_extinct});
  return run_engine(setup, s0, cfg, stop);
}

double cost_J(const Trajectory& traj) {
  if (traj.empty()) throw IncompleteTrajectory("empty trajectory has no certified cost");
  bool certified = traj.has_event(EventKind::infection_extinct) ||
                   (traj.controls.back() == 0.0 && traj.reproduction.back() < 1.0);
  if (!certified)
    throw IncompleteTrajectory("tail cost not certifiably zero; run to extinction");
  std::vector<double> jumps = traj.control_jumps;
  std::sort(jumps.begin(), jumps.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); k++) {
    double dt = traj.times[k + 1] - traj.times[k];
    if (std::binary_search(jumps.begin(), jumps.end(), traj.times[k + 1]))
      acc += traj.controls[k] * dt;  // the applied signal is constant up to the jump
    else
      acc += 0.5 * (traj.controls[k] + traj.controls[k + 1]) * dt;
  }
  return acc;
}

}  // namespace epictrl
