#include "epictrl/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "epictrl/errors.hpp"
#include "epictrl/numerics.hpp"

namespace epictrl {

const char* region_label_name(RegionLabel r) {
  switch (r) {
    case RegionLabel::DMinus: return "safe";
    case RegionLabel::DPlus: return "intervention";
    case RegionLabel::AboveThreshold: return "above_threshold";
    case RegionLabel::Trivial: return "trivial";
  }
  return "unknown";
}

namespace {

double interp_curve(const std::vector<std::pair<double, double>>& samples, double y) {
  if (samples.empty()) throw PreconditionViolated("curve has no samples");
  if (y <= samples.front().first) return samples.front().second;
  if (y >= samples.back().first) return samples.back().second;
  auto it = std::lower_bound(samples.begin(), samples.end(), y,
                             [](const std::pair<double, double>& p, double v) {
                               return p.first < v;
                             });
  auto hi = *it;
  auto lo = *(it - 1);
  double w = (y - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

}  // namespace

double GeometryCache::kappa_at(double y) const { return interp_curve(kappa_samples, y); }

double GeometryCache::lambda_at(double y) const { return interp_curve(lambda_samples, y); }

double compute_tilde_y(const ModelInstance& m) {
  if (!check_rmax_condition(m))
    throw PreconditionViolated("reproduction number at (1, 0) does not exceed 1");
  auto f = [&m](double y) {
    double x = 1.0 - y;
    return x * m.rate.beta(x, y) - m.gamma;
  };
  return bisect(f, 0.0, 1.0, 1e-12);
}

double kappa(const ModelInstance& m, double y) {
  if (y < 0.0 || y >= 1.0) throw PreconditionViolated("kappa defined for y in [0, 1)");
  double hi = 1.0 - y;
  auto g = [&m, y](double x) { return x * m.rate.beta(x, y) - m.gamma; };
  double ghi = g(hi);
  if (ghi < 0.0) {
    // y numerically at the top of the admissible range: root sits at the corner
    if (ghi > -1e-9) return hi;
    throw PreconditionViolated("no reproduction crossing at this infection level");
  }
  return bisect(g, 0.0, hi, 1e-12);
}

GeometryCache compute_separatrix(const ModelInstance& m, double ybar,
                                 const IntegratorConfig& cfg) {
  if (!(ybar > 0.0 && ybar < 1.0))
    throw PreconditionViolated("threshold must lie in (0, 1)");
  GeometryCache g{m, ybar, {}, {}, 0.0, {}, {}, false, false};
  double ty = compute_tilde_y(m);
  g.tilde_y = ty;
  if (ybar > ty)
    throw PreconditionViolated("threshold above the self-limiting level; regime is trivial");
  double xb = kappa(m, ybar);
  g.xbar = xb;

  const int kn = 1000;
  g.kappa_samples.reserve(kn + 1);
  for (int j = 0; j <= kn; j++) {
    double y = ty * j / kn;
    g.kappa_samples.push_back({y, kappa(m, y)});
  }

  // The separatrix is the time-reversed uncontrolled orbit through (xbar, ybar),
  // followed until it leaves through x + y = 1 or the infection level bottoms out.
  IntegratorConfig back_cfg = cfg;
  back_cfg.extinction_eps = std::max(cfg.extinction_eps, 1e-6);
  Trajectory orbit = simulate_backward(m, {xb, ybar}, back_cfg);
  bool hit_boundary = orbit.has_event(EventKind::boundary_exit);
  if (hit_boundary) {
    g.yhat = orbit.final_state().y;
  } else {
    g.yhat = 0.0;
    g.lambda_tail_extrapolated = true;
  }
  g.lambda_samples.reserve(orbit.size());
  double prev_y = -1.0;
  for (std::size_t k = orbit.size(); k-- > 0;) {
    const auto& s = orbit.states[k];
    if (s.y <= prev_y) continue;
    g.lambda_samples.push_back({s.y, s.x});
    prev_y = s.y;
  }
  if (g.lambda_samples.size() < 2)
    throw Error("separatrix integration produced too few samples");
  return g;
}

GeometryCache make_geometry(const ModelInstance& m, double ybar, const IntegratorConfig& cfg) {
  if (!check_rmax_condition(m)) {
    GeometryCache g{m, ybar, {}, {}, 0.0, {}, {}, true, false};
    return g;
  }
  double ty = compute_tilde_y(m);
  if (ybar > ty) {
    GeometryCache g{m, ybar, ty, {}, 0.0, {}, {}, true, false};
    return g;
  }
  return compute_separatrix(m, ybar, cfg);
}

RegionLabel classify(const GeometryCache& g, const EpidemicState& s) {
  if (g.trivial_regime) return RegionLabel::Trivial;
  if (s.y > g.ybar) return RegionLabel::AboveThreshold;
  // The axis y = 0 is invariant, so states at the extinction resolution can
  // never climb to the threshold.
  if (s.y <= 1e-8) return RegionLabel::DMinus;
  double y_lo = g.lambda_tail_extrapolated ? 0.0 : g.yhat;
  if (s.y < y_lo) return RegionLabel::DMinus;
  if (s.x <= g.lambda_at(s.y) + kSeparatrixTieTol) return RegionLabel::DMinus;
  return RegionLabel::DPlus;
}

HitResult hitting_abscissa_h(const GeometryCache& g, const EpidemicState& s,
                             const IntegratorConfig& cfg) {
  if (classify(g, s) != RegionLabel::DPlus)
    throw PreconditionViolated("hitting abscissa defined on the intervention region only");
  if (g.ybar - s.y <= 1e-9) return {s.x, 0.0};
  Trajectory tr = simulate(g.model, ControlSignal::zero(), s, cfg,
                           StopCondition::on_any({EventKind::threshold_hit,
                                                  EventKind::infection_extinct}),
                           g.ybar);
  if (!tr.has_event(EventKind::threshold_hit))
    throw PreconditionViolated("orbit never reaches the threshold");
  return {tr.final_state().x, tr.final_time()};
}

HPartials h_partials(const GeometryCache& g, const EpidemicState& s,
                     const IntegratorConfig& cfg) {
  // Crossing-location noise enters the quotient divided by the step, so the
  // event is resolved far tighter here than an ordinary simulation needs.
  IntegratorConfig fine = cfg;
  fine.event_bisection_tol = std::min(cfg.event_bisection_tol, 1e-13);
  const double d = kHPartialsStep;
  auto h_at = [&](double x, double y) { return hitting_abscissa_h(g, {x, y}, fine).h; };
  auto richardson = [](double a, double b) { return (4.0 * a - b) / 3.0; };

  double hx = richardson((h_at(s.x + d, s.y) - h_at(s.x - d, s.y)) / (2.0 * d),
                         (h_at(s.x + 2.0 * d, s.y) - h_at(s.x - 2.0 * d, s.y)) / (4.0 * d));
  double hy;
  if (s.y + 2.0 * d <= g.ybar) {
    hy = richardson((h_at(s.x, s.y + d) - h_at(s.x, s.y - d)) / (2.0 * d),
                    (h_at(s.x, s.y + 2.0 * d) - h_at(s.x, s.y - 2.0 * d)) / (4.0 * d));
  } else {
    double yhi = std::min(s.y + d, g.ybar);
    hy = (h_at(s.x, yhi) - h_at(s.x, s.y - d)) / (yhi - (s.y - d));
  }
  return {hx, hy};
}

}  // namespace epictrl
