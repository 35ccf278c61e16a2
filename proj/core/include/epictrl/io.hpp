#pragma once

#include <ostream>
#include <string>

#include "epictrl/controller.hpp"
#include "epictrl/dynamics.hpp"
#include "epictrl/geometry.hpp"
#include "epictrl/verification.hpp"

namespace epictrl {

// All floating-point output uses 12 significant digits for reproducible diffs.
std::string fmt12(double v);

// Header t,x,y,u,R; detected events appended as '# event,<time>,<kind>' rows.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Header y,kappa,lambda on a shared y grid; lambda empty where undefined.
void write_curves_csv(std::ostream& os, const GeometryCache& g);

// Summary of one strategy run: {T0, T1, h0, xbar, cost, feasible, regime}.
void write_run_summary_json(std::ostream& os, const FillingTheBoxRun& run,
                            const std::string& regime, bool feasible);

void write_report_json(std::ostream& os, const OptimalityReport& report);

}  // namespace epictrl
