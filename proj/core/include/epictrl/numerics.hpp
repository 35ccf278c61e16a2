#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace epictrl {

// Root of a continuous function with a sign change on [lo, hi], bisected until
// the bracket is narrower than xtol. Returns the bracket midpoint.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-12);

// Composite Simpson quadrature with the given number of panels (panels >= 1).
double composite_simpson(const std::function<double(double)>& f, double a,
                         double b, int panels);

// Uniform double in [0, 1) built from the top 53 bits of the generator output,
// identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace epictrl
