#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "epictrl/errors.hpp"
#include "epictrl/rate_model.hpp"

using namespace epictrl;

TEST_CASE("BSpec evaluates polynomials and their derivatives") {
  BSpec p = BSpec::polynomial({1.0, -2.0, 3.0});
  CHECK(p(0.0) == 1.0);
  CHECK(std::abs(p(0.5) - (1.0 - 1.0 + 0.75)) < 1e-15);
  CHECK(std::abs(p.derivative(0.5) - (-2.0 + 3.0)) < 1e-15);
  BSpec a = BSpec::affine(0.2, 0.1);
  CHECK(a(0.4) == doctest::Approx(0.24).epsilon(1e-15));
  CHECK(a.derivative(0.9) == 0.1);
}

TEST_CASE("BSpec::parse accepts every documented form") {
  CHECK(BSpec::parse("0.3").coeffs == std::vector<double>{0.3});
  CHECK(BSpec::parse("constant(0.35)").coeffs == std::vector<double>{0.35});
  CHECK(BSpec::parse(" affine( 0.2 , 0.1 ) ").coeffs == std::vector<double>{0.2, 0.1});
  CHECK(BSpec::parse("polynomial(1,2,3)").coeffs == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("BSpec::parse rejects malformed specs") {
  CHECK_THROWS_AS(BSpec::parse(""), ConfigError);
  CHECK_THROWS_AS(BSpec::parse("affine(1)"), ConfigError);
  CHECK_THROWS_AS(BSpec::parse("constant(1,2)"), ConfigError);
  CHECK_THROWS_AS(BSpec::parse("spline(1,2)"), ConfigError);
  CHECK_THROWS_AS(BSpec::parse("affine(1,"), ConfigError);
  CHECK_THROWS_AS(BSpec::parse("affine(a,b)"), ConfigError);
}

TEST_CASE("constant rate has flat partials and the bilinear R") {
  ModelInstance m(constant_rate(0.3), 0.1);
  CHECK(m.rate.beta(0.9, 0.05) == 0.3);
  CHECK(m.rate.beta_x(0.5, 0.5) == 0.0);
  CHECK(m.rate.beta_y(0.5, 0.5) == 0.0);
  CHECK(reproduction_number(m, {0.9, 0.05}) == doctest::Approx(2.7).epsilon(1e-14));
  CHECK(rho(m, {0.9, 0.05}) == doctest::Approx(1.0 - 0.1 / 0.27).epsilon(1e-14));
}

TEST_CASE("linear damped rate matches hand-computed values") {
  ModelInstance m(linear_damped_rate(BSpec::affine(0.0, 0.35), 1.0), 0.05);
  CHECK(m.rate.beta(0.7, 0.2) == doctest::Approx(0.35 * 0.7 * 0.8).epsilon(1e-14));
  CHECK(m.rate.beta_x(0.7, 0.2) == doctest::Approx(0.35 * 0.8).epsilon(1e-14));
  CHECK(m.rate.beta_y(0.7, 0.2) == doctest::Approx(-0.35 * 0.7).epsilon(1e-14));
}

TEST_CASE("saturating rate partials agree with central differences") {
  ModelInstance m(saturating_rate(BSpec::affine(0.2, 0.1), 0.5), 0.05);
  double x = 0.6, y = 0.25, d = 1e-6;
  double fd_x = (m.rate.beta(x + d, y) - m.rate.beta(x - d, y)) / (2 * d);
  double fd_y = (m.rate.beta(x, y + d) - m.rate.beta(x, y - d)) / (2 * d);
  CHECK(m.rate.beta_x(x, y) == doctest::Approx(fd_x).epsilon(1e-8));
  CHECK(m.rate.beta_y(x, y) == doctest::Approx(fd_y).epsilon(1e-8));
  CHECK(m.rate.partials_mode == PartialsMode::analytic);
}

TEST_CASE("custom rate derives partials by finite differences") {
  RateModel r = custom_rate("exp-mix", [](double x, double y) {
    return 0.3 * std::exp(-0.5 * y) * (0.5 + 0.5 * x);
  });
  CHECK(r.partials_mode == PartialsMode::finite_difference);
  double x = 0.55, y = 0.2;
  double exact_x = 0.3 * std::exp(-0.5 * y) * 0.5;
  double exact_y = -0.5 * 0.3 * std::exp(-0.5 * y) * (0.5 + 0.5 * x);
  CHECK(r.beta_x(x, y) == doctest::Approx(exact_x).epsilon(1e-7));
  CHECK(r.beta_y(x, y) == doctest::Approx(exact_y).epsilon(1e-7));
}

TEST_CASE("infected-driven rate carries the positivity warning") {
  RateModel r = infected_driven_rate(0.7);
  CHECK(r.positivity_warning);
  CHECK(r.beta(0.92, 0.08) == doctest::Approx((1.0 - 0.7 * 0.92) * 0.08).epsilon(1e-14));
  CHECK(r.beta(0.5, 0.0) == 0.0);
}

TEST_CASE("gamma must be strictly positive") {
  CHECK_THROWS_AS(ModelInstance(constant_rate(0.3), 0.0), Error);
  CHECK_THROWS_AS(ModelInstance(constant_rate(0.3), -0.1), Error);
}

TEST_CASE("reproduction number vanishes with x; rho is undefined there") {
  ModelInstance m(constant_rate(0.3), 0.1);
  CHECK(reproduction_number(m, {0.0, 0.5}) == 0.0);
  CHECK_THROWS_AS(rho(m, {0.0, 0.5}), std::domain_error);
  ModelInstance z(infected_driven_rate(0.7), 0.025);
  CHECK_THROWS_AS(rho(z, {0.5, 0.0}), std::domain_error);
}

TEST_CASE("assumption report separates the monotone families from the counterexample") {
  ModelInstance fig1(linear_damped_rate(BSpec::affine(0.0, 0.35), 1.0), 0.05);
  AssumptionReport ok = check_assumption1(fig1);
  CHECK(ok.satisfied);
  CHECK(ok.min_xbx_plus_b > 0.0);
  CHECK(ok.max_beta_y <= 0.0);
  CHECK(ok.violations.empty());

  ModelInstance cex(infected_driven_rate(0.7), 0.025);
  AssumptionReport bad = check_assumption1(cex);
  CHECK_FALSE(bad.satisfied);
  CHECK_FALSE(bad.violations.empty());
}

TEST_CASE("growth condition at the virgin corner") {
  CHECK(check_rmax_condition(ModelInstance(constant_rate(0.3), 0.1)));
  CHECK_FALSE(check_rmax_condition(ModelInstance(constant_rate(0.3), 0.35)));
  // The infected-driven rate vanishes at y = 0, so the corner cannot grow.
  CHECK_FALSE(check_rmax_condition(ModelInstance(infected_driven_rate(0.7), 0.025)));
}
