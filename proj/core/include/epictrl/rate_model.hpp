#pragma once

#include <functional>
#include <string>
#include <vector>

#include "epictrl/state.hpp"

namespace epictrl {

// b(x) = sum_i coeffs[i] * x^i, the susceptible-dependent factor of the
// parametric rate families.
struct BSpec {
  std::vector<double> coeffs;

  static BSpec constant(double c);
  static BSpec affine(double c0, double c1);
  static BSpec polynomial(std::vector<double> coeffs);
  // Accepts "constant(c)", "affine(c0, c1)", "polynomial(c0, c1, ...)",
  // or a bare number (shorthand for constant). Throws ConfigError.
  static BSpec parse(const std::string& text);

  double operator()(double x) const;
  double derivative(double x) const;
  std::string to_string() const;
};

enum class PartialsMode { analytic, finite_difference };

// Central-difference step used when no analytic partials are supplied.
inline constexpr double kPartialsFdStep = 1e-6;

using RateFn = std::function<double(double, double)>;

// Infection rate beta(x, y) with partial derivatives and metadata.
struct RateModel {
  std::string name;
  RateFn beta;
  RateFn beta_x;
  RateFn beta_y;
  PartialsMode partials_mode = PartialsMode::analytic;
  // Set when beta vanishes somewhere on S with y < 1 is allowed by
  // construction (the infected-driven family at y = 0).
  bool positivity_warning = false;
};

struct ModelInstance {
  RateModel rate;
  double gamma{};  // recovery rate, > 0

  ModelInstance(RateModel r, double g);
};

// Grid evidence for the standing monotonicity assumptions
// x*beta_x + beta > 0 and beta_y <= 0.
struct AssumptionReport {
  int grid_resolution{};
  double min_xbx_plus_b{};
  double max_beta_y{};
  bool satisfied{};
  std::vector<EpidemicState> violations;
};

// beta == b everywhere.
RateModel constant_rate(double b);
// beta = b(x) / (1 + a*y).
RateModel saturating_rate(const BSpec& b, double a);
// beta = b(x) * (1 - a*y).
RateModel linear_damped_rate(const BSpec& b, double a);
// beta = (1 - c*x) * y; violates the monotonicity assumptions and vanishes at
// y = 0, carried with positivity_warning set.
RateModel infected_driven_rate(double c);
// Wraps a bare rate function, deriving partials by central differences.
RateModel custom_rate(std::string name, RateFn beta);

// R(x, y) = beta(x, y) * x / gamma. Total on S.
double reproduction_number(const ModelInstance& m, const EpidemicState& s);

// rho = (R - 1) / R = 1 - gamma / (x * beta). Throws std::domain_error when
// x = 0 or beta(x, y) = 0.
double rho(const ModelInstance& m, const EpidemicState& s);

// Samples both assumption conditions on an interior n x n grid over S.
AssumptionReport check_assumption1(const ModelInstance& m, int n = 200);

// true iff beta(1, 0) > gamma, the condition for the epidemic to be able to
// grow at all from a fully susceptible population.
bool check_rmax_condition(const ModelInstance& m);

}  // namespace epictrl
