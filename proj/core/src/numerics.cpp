#include "epictrl/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace epictrl {

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::invalid_argument("bisect: no sign change on bracket");
  while (hi - lo > xtol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         int panels) {
  if (panels < 1) throw std::invalid_argument("composite_simpson: panels < 1");
  double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; i++) acc += 2.0 * f(a + i * h);
  for (int i = 0; i < panels; i++) acc += 4.0 * f(a + (i + 0.5) * h);
  return acc * h / 6.0;
}

}  // namespace epictrl
