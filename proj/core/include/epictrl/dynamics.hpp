#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "epictrl/rate_model.hpp"
#include "epictrl/state.hpp"

namespace epictrl {

enum class EventKind { threshold_hit, R_equals_one, boundary_exit, infection_extinct };

const char* event_kind_name(EventKind k);

struct Event {
  double time{};
  EventKind kind{};
};

// Right-continuous control signal u(t) in [0, 1].
struct ControlSignal {
  enum class Kind { zero, open_loop_piecewise_constant, feedback };

  Kind kind = Kind::zero;
  // Open-loop: values[i] applies on [breakpoints[i], breakpoints[i+1]);
  // 0 before the first breakpoint. Breakpoints strictly increasing.
  std::vector<double> breakpoints;
  std::vector<double> values;
  // Feedback: policy(t, state) -> [0, 1].
  std::function<double(double, const EpidemicState&)> policy;

  static ControlSignal zero();
  static ControlSignal open_loop(std::vector<double> breakpoints,
                                 std::vector<double> values);
  static ControlSignal feedback(std::function<double(double, const EpidemicState&)> policy);

  // Value applied at time t in state s. Feedback values farther than 1e-12
  // outside [0, 1] raise Error; closer ones are clamped.
  double at(double t, const EpidemicState& s) const;
};

struct Trajectory {
  std::vector<double> times;   // strictly increasing
  std::vector<EpidemicState> states;
  std::vector<double> controls;      // u applied from times[k] onward
  std::vector<double> reproduction;  // R at times[k]
  std::vector<Event> events;
  // Times where the applied control jumps; cost integration switches from
  // trapezoid to the exact rectangle on intervals ending there.
  std::vector<double> control_jumps;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  EpidemicState final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
  double max_y() const;
  bool has_event(EventKind k) const;
  // Time of the first event of the given kind.
  std::optional<double> first_event(EventKind k) const;
};

struct IntegratorConfig {
  double step = 1e-3;
  double event_bisection_tol = 1e-10;  // on the event function value
  double extinction_eps = 1e-8;
  double max_time = 1e4;
};

struct StopCondition {
  enum class Kind { at_time, on_events, extinction };

  Kind kind = Kind::extinction;
  double time{};
  std::vector<EventKind> events;

  static StopCondition at_time(double t);
  static StopCondition on_event(EventKind k);
  static StopCondition on_any(std::vector<EventKind> kinds);
  static StopCondition extinction();
};

// One classical 4th-order Runge-Kutta step of the controlled system
//   dx/dt = -(1-u) beta x y,  dy/dt = (1-u) beta x y - gamma y
// with u held constant. The result is clamped onto S; throws StepRejected if
// the unclamped result leaves S by more than 1e-6.
EpidemicState step(const ModelInstance& m, const EpidemicState& s, double u, double dt);

// Fixed-step integration with steps split exactly at open-loop breakpoints and
// sign changes of the event functions (y - threshold, R - 1, x + y - 1,
// y - extinction_eps) refined by bisection. The threshold event is active only
// when a threshold is supplied. Throws HorizonExceeded if the stop condition
// is not reached by max_time.
Trajectory simulate(const ModelInstance& m, const ControlSignal& c, const EpidemicState& s0,
                    const IntegratorConfig& cfg, const StopCondition& stop,
                    std::optional<double> threshold = std::nullopt);

// Integrates the time-reversed uncontrolled system
//   dx/dt = beta x y,  dy/dt = -beta x y + gamma y
// until the boundary x + y = 1 is crossed or y falls below extinction_eps
// (or until stop_time when given).
Trajectory simulate_backward(const ModelInstance& m, const EpidemicState& s0,
                             const IntegratorConfig& cfg,
                             std::optional<double> stop_time = std::nullopt);

// Integral of the control samples over time: trapezoid, degenerating to the
// exact rectangle on intervals ending at a recorded control jump. Throws
// IncompleteTrajectory unless the tail cost is certifiably zero (the
// trajectory reached extinction, or ended with u = 0 and R < 1).
double cost_J(const Trajectory& traj);

}  // namespace epictrl
