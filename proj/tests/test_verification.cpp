#include <cmath>
#include <random>

#include "doctest.h"
#include "epictrl/controller.hpp"
#include "epictrl/errors.hpp"
#include "epictrl/verification.hpp"

using namespace epictrl;

namespace {
ModelInstance fig1_model() {
  return ModelInstance(linear_damped_rate(BSpec::affine(0.0, 0.35), 1.0), 0.05);
}
const GeometryCache& fig1_geometry() {
  static GeometryCache g = make_geometry(fig1_model(), 0.2);
  return g;
}
}  // namespace

TEST_CASE("family factories set their kind and payload") {
  auto d = AlternativePolicyFamily::delayed_clamp({0.1, 1.0});
  CHECK(d.kind == AlternativePolicyFamily::Kind::delayed_clamp);
  CHECK(d.delays.size() == 2);
  auto r = AlternativePolicyFamily::random_piecewise(9, 25);
  CHECK(r.kind == AlternativePolicyFamily::Kind::random_piecewise);
  CHECK(r.seed == 9);
  CHECK(r.count == 25);
}

TEST_CASE("delaying the optimal signal breaches the threshold") {
  const GeometryCache& g = fig1_geometry();
  auto fam = AlternativePolicyFamily::delayed_clamp({0.5});
  OptimalityReport rep = sweep_alternatives(g, {0.99, 0.01}, fam);
  REQUIRE(rep.alternatives.size() == 1);
  CHECK_FALSE(rep.alternatives[0].feasible);
  CHECK(rep.verdict);  // no feasible competitor at all
}

TEST_CASE("overshooting margins stay feasible and cost strictly more") {
  const GeometryCache& g = fig1_geometry();
  auto fam = AlternativePolicyFamily::overshoot_margin({0.02});
  OptimalityReport rep = sweep_alternatives(g, {0.99, 0.01}, fam);
  REQUIRE(rep.alternatives.size() == 1);
  CHECK(rep.alternatives[0].feasible);
  CHECK(rep.alternatives[0].J > rep.J_star + 0.1);
  CHECK(rep.verdict);
}

TEST_CASE("a brief early push cannot flatten the fig1 epidemic") {
  const GeometryCache& g = fig1_geometry();
  auto fam = AlternativePolicyFamily::early_constant({0.5}, {0.0}, {2.0});
  OptimalityReport rep = sweep_alternatives(g, {0.99, 0.01}, fam);
  REQUIRE(rep.alternatives.size() == 1);
  CHECK_FALSE(rep.alternatives[0].feasible);
}

TEST_CASE("random surplus draws are feasible and never undercut the optimum") {
  const GeometryCache& g = fig1_geometry();
  auto fam = AlternativePolicyFamily::random_piecewise(42, 8);
  OptimalityReport rep = sweep_alternatives(g, {0.99, 0.01}, fam);
  REQUIRE(rep.alternatives.size() == 8);
  int feasible = 0;
  for (const auto& a : rep.alternatives) {
    if (a.feasible) {
      feasible++;
      CHECK(a.J >= rep.J_star - rep.tol_opt);
    }
  }
  CHECK(feasible >= 6);
  CHECK(rep.verdict);
  CHECK(rep.strict_gap_ok);
}

TEST_CASE("sweeps are deterministic in the seed") {
  const GeometryCache& g = fig1_geometry();
  auto fam = AlternativePolicyFamily::random_piecewise(5, 3);
  OptimalityReport a = sweep_alternatives(g, {0.99, 0.01}, fam);
  OptimalityReport b = sweep_alternatives(g, {0.99, 0.01}, fam);
  REQUIRE(a.alternatives.size() == b.alternatives.size());
  for (std::size_t i = 0; i < a.alternatives.size(); i++) {
    CHECK(a.alternatives[i].J == b.alternatives[i].J);
    CHECK(a.alternatives[i].differs_measure == b.alternatives[i].differs_measure);
  }
}

TEST_CASE("finite-cost runs cross below R = 1") {
  ModelInstance m = fig1_model();
  Trajectory tr = simulate(m, ControlSignal::zero(), {0.99, 0.01}, {},
                           StopCondition::extinction());
  CHECK(check_finite_cost_crossing(m, tr));
  Trajectory stub;
  stub.times = {0.0, 1.0};
  stub.states = {{0.9, 0.05}, {0.89, 0.06}};
  stub.controls = {0.0, 0.0};
  stub.reproduction = {5.0, 4.9};
  CHECK_FALSE(check_finite_cost_crossing(m, stub));
}

TEST_CASE("interior sampling lands strictly inside the intervention region") {
  const GeometryCache& g = fig1_geometry();
  std::mt19937_64 rng(3);
  auto pts = sample_dplus_states(g, 30, rng, 1e-3);
  REQUIRE(pts.size() == 30);
  for (const auto& s : pts) {
    CHECK(classify(g, s) == RegionLabel::DPlus);
    CHECK(s.y > 0.0);
    CHECK(s.y < 0.2);
    CHECK(s.x > g.lambda_at(s.y));
    CHECK(s.x + s.y < 1.0);
  }
  std::mt19937_64 rng2(3);
  auto pts2 = sample_dplus_states(g, 30, rng2, 1e-3);
  CHECK(pts2[7].x == pts[7].x);
  CHECK(pts2[7].y == pts[7].y);
}

TEST_CASE("central differences of a known field, and the simplex guard") {
  auto field = [](const EpidemicState& s) { return s.x * s.x * s.y; };
  EpidemicState s{0.5, 0.3};
  CHECK(finite_difference(field, s, Axis::x, 1e-6) ==
        doctest::Approx(2 * 0.5 * 0.3).epsilon(1e-7));
  CHECK(finite_difference(field, s, Axis::y, 1e-6) ==
        doctest::Approx(0.25).epsilon(1e-7));
  CHECK_THROWS_AS(finite_difference(field, {0.9999999, 0.0}, Axis::x, 1e-6),
                  std::domain_error);
}

TEST_CASE("the invariant suite passes end to end on the classical model") {
  ModelInstance m(constant_rate(0.3), 0.1);
  GeometryCache g = make_geometry(m, 0.2);
  auto checks = run_invariant_suite(g, {0.9, 0.05}, {}, 6, 42, 1e-3);
  REQUIRE_FALSE(checks.empty());
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.note);
    CHECK(c.pass);
  }
}

TEST_CASE("the invariant suite degenerates gracefully in the trivial regime") {
  ModelInstance m(constant_rate(0.3), 0.35);
  GeometryCache g = make_geometry(m, 0.2);
  auto checks = run_invariant_suite(g, {0.9, 0.05}, {}, 4, 42, 1e-3);
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].pass);
}
