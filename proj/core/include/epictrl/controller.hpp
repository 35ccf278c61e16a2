#pragma once

#include "epictrl/dynamics.hpp"
#include "epictrl/geometry.hpp"

namespace epictrl {

// Tolerance of the y = ybar equality test in the threshold policy.
inline constexpr double kRideTol = 1e-9;

// Threshold feedback policy: 0 below the threshold, [rho(x, ybar)]_+ on it.
// Throws PreconditionViolated when y > ybar + 1e-9.
double mu(const GeometryCache& g, const EpidemicState& s);

// One run of the threshold-riding strategy: free spread to the threshold,
// ride it with the minimal control, release when the ride control reaches 0.
struct FillingTheBoxRun {
  double T0{};  // threshold-hit time
  double T1{};  // release time
  Trajectory trajectory;
  ControlSignal control;  // open-loop realization of the applied feedback
  double cost{};
  double h0{};         // abscissa of the threshold hit
  double release_x{};  // x at release; kappa(ybar) under the monotonicity assumptions
  bool intervened{};   // false when the start never needed control
};

// Runs the strategy from s0, classifying the start against the geometry:
// safe or trivial starts produce an uncontrolled zero-cost run. Throws
// InfeasibleStart when y0 > ybar.
FillingTheBoxRun run_filling_the_box(const GeometryCache& g, const EpidemicState& s0,
                                     const IntegratorConfig& cfg = {});

// Geometry-free variant for models outside the monotonicity assumptions: the
// ride releases at the first zero of rho(., ybar) below the hit abscissa,
// found by scan and bisection.
FillingTheBoxRun run_filling_the_box_direct(const ModelInstance& m, double ybar,
                                            const EpidemicState& s0,
                                            const IntegratorConfig& cfg = {});

struct ValueQuery {
  EpidemicState state;
  double value{};
  RegionLabel region{};
};

// Quadrature panel count for the value function.
inline constexpr int kValuePanels = 1000;

// Minimal total control effort from s: 0 on the safe region, the scaled
// integral of rho(., ybar) over [xbar, h(s)] on DPlus. Simpson with 1000
// panels, cross-checked at 2000. Throws PreconditionViolated when y > ybar.
ValueQuery value_function(const GeometryCache& g, const EpidemicState& s,
                          const IntegratorConfig& cfg = {});

struct VPartials {
  double vx{};     // composed through the h partials
  double vy{};
  double vx_fd{};  // central finite differences of the value function
  double vy_fd{};
};

// Both derivative routes for V at a strictly interior DPlus state; the two
// must agree to about 1e-3 relative wherever V is differentiable.
VPartials v_partials(const GeometryCache& g, const EpidemicState& s,
                     const IntegratorConfig& cfg = {});

}  // namespace epictrl
