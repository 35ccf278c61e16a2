#include <cmath>

#include "doctest.h"
#include "epictrl/errors.hpp"
#include "epictrl/geometry.hpp"
#include "epictrl/numerics.hpp"

using namespace epictrl;

namespace {
ModelInstance fig1_model() {
  return ModelInstance(linear_damped_rate(BSpec::affine(0.0, 0.35), 1.0), 0.05);
}
ModelInstance fig2_model() {
  return ModelInstance(linear_damped_rate(BSpec::affine(0.2, 0.1), 0.5), 0.05);
}
ModelInstance sir_model() { return ModelInstance(constant_rate(0.3), 0.1); }
ModelInstance saturating_model() {
  return ModelInstance(saturating_rate(BSpec::constant(0.35), 1.0), 0.05);
}
}  // namespace

// Reference values below were frozen from independent high-precision
// root-finding and integration of the same equations.

TEST_CASE("critical infection level for all four families") {
  CHECK(compute_tilde_y(fig1_model()) ==
        doctest::Approx(0.4772420414252898).epsilon(1e-10));
  CHECK(compute_tilde_y(fig2_model()) ==
        doctest::Approx(0.6752820427552539).epsilon(1e-10));
  CHECK(compute_tilde_y(sir_model()) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(compute_tilde_y(saturating_model()) == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("tilde_y needs growth at the virgin corner") {
  CHECK_THROWS_AS(compute_tilde_y(ModelInstance(constant_rate(0.3), 0.35)),
                  PreconditionViolated);
}

TEST_CASE("kappa solves R = 1 and hits the corner at tilde_y") {
  CHECK(kappa(fig1_model(), 0.2) ==
        doctest::Approx(std::sqrt(1.0 / 5.6)).epsilon(1e-10));
  CHECK(kappa(fig2_model(), 0.2) ==
        doctest::Approx(0.24721912892464715).epsilon(1e-10));
  CHECK(kappa(sir_model(), 0.37) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(kappa(saturating_model(), 0.2) == doctest::Approx(6.0 / 35.0).epsilon(1e-10));

  ModelInstance m = fig1_model();
  double ty = compute_tilde_y(m);
  CHECK(std::abs(kappa(m, ty) - (1.0 - ty)) < 1e-9);
  CHECK_THROWS_AS(kappa(m, 0.9), PreconditionViolated);
}

TEST_CASE("separatrix through the high-threshold fig2 box hits the outer boundary") {
  GeometryCache g = make_geometry(fig2_model(), 0.5);
  REQUIRE_FALSE(g.trivial_regime);
  REQUIRE(g.xbar.has_value());
  CHECK(*g.xbar == doctest::Approx(0.2909944487358056).epsilon(1e-10));
  CHECK_FALSE(g.lambda_tail_extrapolated);
  CHECK(g.yhat == doctest::Approx(0.3622390372886334).epsilon(1e-7));
  CHECK(g.lambda_at(0.45) == doctest::Approx(0.4799335024632338).epsilon(1e-7));
  CHECK(g.lambda_at(0.48) == doctest::Approx(0.40375235003385135).epsilon(1e-7));
  CHECK(g.lambda_at(0.5) == doctest::Approx(*g.xbar).epsilon(1e-12));
  // Lowest separatrix point sits on x + y = 1.
  CHECK(std::abs(g.lambda_at(g.yhat) + g.yhat - 1.0) < 1e-6);
}

TEST_CASE("separatrix for the low-threshold fig1 box decays to the axis") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  REQUIRE_FALSE(g.trivial_regime);
  CHECK(g.lambda_tail_extrapolated);
  CHECK(g.yhat == 0.0);
  // lambda decreases as y grows toward the threshold.
  CHECK(g.lambda_at(0.05) > g.lambda_at(0.15));
  CHECK(g.lambda_at(0.2) == doctest::Approx(std::sqrt(1.0 / 5.6)).epsilon(1e-10));
}

TEST_CASE("trivial regimes are reported, not computed") {
  GeometryCache no_growth = make_geometry(ModelInstance(constant_rate(0.3), 0.35), 0.2);
  CHECK(no_growth.trivial_regime);
  GeometryCache high_cap = make_geometry(sir_model(), 0.68);  // above tilde_y = 2/3
  CHECK(high_cap.trivial_regime);
  GeometryCache at_cap = make_geometry(sir_model(), 0.66);  // still below tilde_y
  CHECK_FALSE(at_cap.trivial_regime);
  CHECK_THROWS_AS(compute_separatrix(sir_model(), 0.68), PreconditionViolated);
}

TEST_CASE("classification against the separatrix") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  CHECK(classify(g, {0.99, 0.01}) == RegionLabel::DPlus);
  CHECK(classify(g, {0.3, 0.1}) == RegionLabel::DMinus);
  CHECK(classify(g, {0.5, 0.25}) == RegionLabel::AboveThreshold);
  // The axis is invariant: no x can climb from y = 0.
  CHECK(classify(g, {0.95, 0.0}) == RegionLabel::DMinus);
  GeometryCache t = make_geometry(ModelInstance(constant_rate(0.3), 0.35), 0.2);
  CHECK(classify(t, {0.9, 0.05}) == RegionLabel::Trivial);
}

TEST_CASE("kappa interpolation stays close to the exact root between samples") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  ModelInstance m = fig1_model();
  for (double y : {0.0137, 0.111, 0.1993}) {
    CHECK(g.kappa_at(y) == doctest::Approx(kappa(m, y)).epsilon(1e-6));
  }
}

TEST_CASE("hitting abscissa matches the frozen fig1 reference") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  HitResult hit = hitting_abscissa_h(g, {0.99, 0.01});
  CHECK(hit.h == doctest::Approx(0.746457432643806).epsilon(1e-9));
  CHECK(hit.time == doctest::Approx(13.674238).epsilon(2e-6));
}

TEST_CASE("hitting abscissa is the identity on the threshold itself") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  HitResult hit = hitting_abscissa_h(g, {0.6, 0.2 - 1e-10});
  CHECK(hit.h == 0.6);
  CHECK(hit.time == 0.0);
}

TEST_CASE("hitting abscissa rejects safe states") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  CHECK_THROWS_AS(hitting_abscissa_h(g, {0.3, 0.1}), PreconditionViolated);
}

TEST_CASE("classical-SIR hitting abscissa matches the conserved-quantity oracle") {
  GeometryCache g = make_geometry(sir_model(), 0.2);
  EpidemicState s{0.9, 0.05};
  HitResult hit = hitting_abscissa_h(g, s);
  CHECK(hit.h == doctest::Approx(0.6323487840099659).epsilon(1e-9));
  // Independent route: x + y - (gamma/b) ln x is constant on free orbits.
  double c = s.x + s.y - (0.1 / 0.3) * std::log(s.x);
  double h = bisect([&](double v) { return v + 0.2 - (0.1 / 0.3) * std::log(v) - c; },
                    0.1 / 0.3, 1.0);
  CHECK(hit.h == doctest::Approx(h).epsilon(1e-9));
}

TEST_CASE("h is conserved along the free orbit") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  EpidemicState s{0.9, 0.04};
  double h0 = hitting_abscissa_h(g, s).h;
  // A misaligned step keeps the mid-orbit state off the default grid, so the
  // second hitting run cannot simply retrace the first one.
  IntegratorConfig shifted;
  shifted.step = 7e-4;
  Trajectory tr = simulate(g.model, ControlSignal::zero(), s, shifted,
                           StopCondition::on_event(EventKind::threshold_hit), 0.2);
  EpidemicState mid = tr.states[tr.size() / 2];
  CHECK(hitting_abscissa_h(g, mid).h == doctest::Approx(h0).epsilon(1e-7));
}

TEST_CASE("h partials satisfy the transport identity") {
  GeometryCache g = make_geometry(fig1_model(), 0.2);
  EpidemicState s{0.8, 0.1};
  HPartials p = h_partials(g, s);
  double R = reproduction_number(g.model, s);
  CHECK(std::abs(p.hx * R - p.hy * (R - 1.0)) < 1e-4);
  CHECK(p.hy >= 0.0);
}
