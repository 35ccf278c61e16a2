#include "epictrl/io.hpp"

#include <cmath>
#include <cstdio>

namespace epictrl {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string json_num(double v) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  return fmt12(v);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,x,y,u,R\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    os << fmt12(tr.times[k]) << ',' << fmt12(tr.states[k].x) << ','
       << fmt12(tr.states[k].y) << ',' << fmt12(tr.controls[k]) << ','
       << fmt12(tr.reproduction[k]) << '\n';
  }
  for (const auto& e : tr.events)
    os << "# event," << fmt12(e.time) << ',' << event_kind_name(e.kind) << '\n';
}

void write_curves_csv(std::ostream& os, const GeometryCache& g) {
  os << "y,kappa,lambda\n";
  if (g.trivial_regime || g.kappa_samples.empty()) return;
  const int n = 2000;
  double y_floor = 0.0;
  if (!g.lambda_samples.empty() && !g.lambda_tail_extrapolated)
    y_floor = g.lambda_samples.front().first;
  for (int j = 0; j <= n; ++j) {
    double y = g.ybar * static_cast<double>(j) / n;
    os << fmt12(y) << ',' << fmt12(g.kappa_at(y)) << ',';
    if (!g.lambda_samples.empty() && y >= y_floor - 1e-12)
      os << fmt12(g.lambda_at(y));
    os << '\n';
  }
}

void write_run_summary_json(std::ostream& os, const FillingTheBoxRun& run,
                            const std::string& regime, bool feasible) {
  os << "{\n";
  os << "  \"regime\": \"" << json_escape(regime) << "\",\n";
  os << "  \"intervened\": " << (run.intervened ? "true" : "false") << ",\n";
  os << "  \"feasible\": " << (feasible ? "true" : "false") << ",\n";
  os << "  \"T0\": " << json_num(run.T0) << ",\n";
  os << "  \"T1\": " << json_num(run.T1) << ",\n";
  os << "  \"h0\": " << json_num(run.h0) << ",\n";
  os << "  \"release_x\": " << json_num(run.release_x) << ",\n";
  os << "  \"cost\": " << json_num(run.cost) << ",\n";
  os << "  \"final_time\": " << json_num(run.trajectory.final_time()) << ",\n";
  os << "  \"peak_y\": " << json_num(run.trajectory.max_y()) << "\n";
  os << "}\n";
}

void write_report_json(std::ostream& os, const OptimalityReport& report) {
  os << "{\n";
  os << "  \"scenario\": \"" << json_escape(report.scenario) << "\",\n";
  os << "  \"J_star\": " << json_num(report.J_star) << ",\n";
  os << "  \"tol_opt\": " << json_num(report.tol_opt) << ",\n";
  os << "  \"min_feasible_J\": "
     << (std::isinf(report.min_feasible_J) ? "null" : json_num(report.min_feasible_J)) << ",\n";
  os << "  \"verdict\": " << (report.verdict ? "true" : "false") << ",\n";
  os << "  \"strict_gap_ok\": " << (report.strict_gap_ok ? "true" : "false") << ",\n";
  os << "  \"alternatives\": [\n";
  for (std::size_t i = 0; i < report.alternatives.size(); ++i) {
    const auto& alt = report.alternatives[i];
    os << "    {\"descriptor\": \"" << json_escape(alt.descriptor) << "\", \"feasible\": "
       << (alt.feasible ? "true" : "false") << ", \"J\": " << json_num(alt.J)
       << ", \"differs_measure\": " << json_num(alt.differs_measure) << "}";
    os << (i + 1 < report.alternatives.size() ? ",\n" : "\n");
  }
  os << "  ]\n";
  os << "}\n";
}

}  // namespace epictrl
