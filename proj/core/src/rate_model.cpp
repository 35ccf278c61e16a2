#include "epictrl/rate_model.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "epictrl/errors.hpp"

namespace epictrl {

BSpec BSpec::constant(double c) { return BSpec{{c}}; }

BSpec BSpec::affine(double c0, double c1) { return BSpec{{c0, c1}}; }

BSpec BSpec::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ConfigError("polynomial b(x) needs at least one coefficient");
  return BSpec{std::move(coeffs)};
}

namespace {

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in b(x) spec");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) pos++;
    if (pos != item.size()) throw ConfigError("bad number '" + item + "' in b(x) spec");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty argument list in b(x) spec");
  return out;
}

}  // namespace

BSpec BSpec::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("empty b(x) spec");

  auto open = s.find('(');
  if (open == std::string::npos) {
    // bare number, shorthand for constant
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return constant(v);
    } catch (const std::exception&) {
      throw ConfigError("unrecognized b(x) spec '" + text + "'");
    }
  }
  if (s.back() != ')') throw ConfigError("missing ')' in b(x) spec '" + text + "'");
  std::string head = s.substr(0, open);
  std::string args = s.substr(open + 1, s.size() - open - 2);
  std::vector<double> coeffs = parse_number_list(args);
  if (head == "constant") {
    if (coeffs.size() != 1) throw ConfigError("constant(...) takes one argument");
    return constant(coeffs[0]);
  }
  if (head == "affine") {
    if (coeffs.size() != 2) throw ConfigError("affine(...) takes two arguments");
    return affine(coeffs[0], coeffs[1]);
  }
  if (head == "polynomial") return polynomial(std::move(coeffs));
  throw ConfigError("unknown b(x) form '" + head + "'");
}

double BSpec::operator()(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

double BSpec::derivative(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * static_cast<double>(i);
  return acc;
}

std::string BSpec::to_string() const {
  std::ostringstream os;
  if (coeffs.size() == 1) {
    os << "constant(" << coeffs[0] << ")";
  } else if (coeffs.size() == 2) {
    os << "affine(" << coeffs[0] << ", " << coeffs[1] << ")";
  } else {
    os << "polynomial(";
    for (std::size_t i = 0; i < coeffs.size(); i++) os << (i ? ", " : "") << coeffs[i];
    os << ")";
  }
  return os.str();
}

ModelInstance::ModelInstance(RateModel r, double g) : rate(std::move(r)), gamma(g) {
  if (!(gamma > 0.0)) throw Error("recovery rate must be strictly positive");
}

RateModel constant_rate(double b) {
  RateModel m;
  std::ostringstream name;
  name << "constant(" << b << ")";
  m.name = name.str();
  m.beta = [b](double, double) { return b; };
  m.beta_x = [](double, double) { return 0.0; };
  m.beta_y = [](double, double) { return 0.0; };
  return m;
}

RateModel saturating_rate(const BSpec& b, double a) {
  RateModel m;
  std::ostringstream name;
  name << "saturating(" << b.to_string() << ", " << a << ")";
  m.name = name.str();
  m.beta = [b, a](double x, double y) { return b(x) / (1.0 + a * y); };
  m.beta_x = [b, a](double x, double y) { return b.derivative(x) / (1.0 + a * y); };
  m.beta_y = [b, a](double x, double y) {
    double d = 1.0 + a * y;
    return -a * b(x) / (d * d);
  };
  return m;
}

RateModel linear_damped_rate(const BSpec& b, double a) {
  RateModel m;
  std::ostringstream name;
  name << "linear_damped(" << b.to_string() << ", " << a << ")";
  m.name = name.str();
  m.beta = [b, a](double x, double y) { return b(x) * (1.0 - a * y); };
  m.beta_x = [b, a](double x, double y) { return b.derivative(x) * (1.0 - a * y); };
  m.beta_y = [b, a](double x, double) { return -a * b(x); };
  return m;
}

RateModel infected_driven_rate(double c) {
  RateModel m;
  std::ostringstream name;
  name << "infected_driven(" << c << ")";
  m.name = name.str();
  m.beta = [c](double x, double y) { return (1.0 - c * x) * y; };
  m.beta_x = [c](double, double y) { return -c * y; };
  m.beta_y = [c](double x, double) { return 1.0 - c * x; };
  m.positivity_warning = true;  // beta = 0 on the whole y = 0 edge
  return m;
}

RateModel custom_rate(std::string name, RateFn beta) {
  RateModel m;
  m.name = std::move(name);
  m.beta = std::move(beta);
  m.partials_mode = PartialsMode::finite_difference;
  RateFn b = m.beta;
  // Central differences with the sample points pulled back inside S.
  m.beta_x = [b](double x, double y) {
    double lo = std::max(x - kPartialsFdStep, 0.0);
    double hi = std::min(x + kPartialsFdStep, 1.0 - y);
    return (b(hi, y) - b(lo, y)) / (hi - lo);
  };
  m.beta_y = [b](double x, double y) {
    double lo = std::max(y - kPartialsFdStep, 0.0);
    double hi = std::min(y + kPartialsFdStep, 1.0 - x);
    return (b(x, hi) - b(x, lo)) / (hi - lo);
  };
  return m;
}

double reproduction_number(const ModelInstance& m, const EpidemicState& s) {
  if (s.x == 0.0) return 0.0;
  return m.rate.beta(s.x, s.y) * s.x / m.gamma;
}

double rho(const ModelInstance& m, const EpidemicState& s) {
  double xb = s.x * m.rate.beta(s.x, s.y);
  if (xb == 0.0) throw std::domain_error("rho undefined where x*beta = 0");
  return 1.0 - m.gamma / xb;
}

AssumptionReport check_assumption1(const ModelInstance& m, int n) {
  if (n < 2) throw PreconditionViolated("assumption grid needs n >= 2");
  AssumptionReport rep;
  rep.grid_resolution = n;
  bool first = true;
  // Interior grid: the conditions degenerate on the x = 0 edge for every
  // rate proportional to x, and that edge carries no dynamics.
  for (int i = 0; i < n; i++) {
    double x = static_cast<double>(i + 1) / (n + 1);
    for (int j = 0; j < n; j++) {
      double y = static_cast<double>(j + 1) / (n + 1);
      if (x + y > 1.0) break;
      double growth = x * m.rate.beta_x(x, y) + m.rate.beta(x, y);
      double by = m.rate.beta_y(x, y);
      if (first || growth < rep.min_xbx_plus_b) rep.min_xbx_plus_b = growth;
      if (first || by > rep.max_beta_y) rep.max_beta_y = by;
      first = false;
      if (growth <= 0.0 || by > 0.0) rep.violations.push_back({x, y});
    }
  }
  rep.satisfied = !first && rep.min_xbx_plus_b > 0.0 && rep.max_beta_y <= 0.0;
  return rep;
}

bool check_rmax_condition(const ModelInstance& m) {
  return m.rate.beta(1.0, 0.0) > m.gamma;
}

}  // namespace epictrl
