#pragma once

namespace epictrl {

// Numerical slack on the simplex constraints.
inline constexpr double kSimplexTol = 1e-9;

// Point (x, y) in the state space S = {x >= 0, y >= 0, x + y <= 1}.
// z = 1 - x - y is implicit.
struct EpidemicState {
  double x{};
  double y{};
};

inline bool in_simplex(const EpidemicState& s, double tol = kSimplexTol) {
  return s.x >= -tol && s.y >= -tol && s.x + s.y <= 1.0 + tol;
}

// Largest amount by which s violates the simplex constraints (0 if inside).
inline double simplex_violation(const EpidemicState& s) {
  double v = 0.0;
  if (-s.x > v) v = -s.x;
  if (-s.y > v) v = -s.y;
  if (s.x + s.y - 1.0 > v) v = s.x + s.y - 1.0;
  return v;
}

}  // namespace epictrl
