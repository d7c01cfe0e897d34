#include "kinanneal/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kinanneal/errors.hpp"

namespace kinanneal {

namespace {

constexpr double kAckleyA = 20.0;
constexpr double kAckleyB = 0.2;
const double kAckleyC = 2.0 * std::numbers::pi;

double ackley_value(std::span<const double> x) {
  const double d = static_cast<double>(x.size());
  double s2 = 0.0, sc = 0.0;
  for (double xi : x) {
    s2 += xi * xi;
    sc += std::cos(kAckleyC * xi);
  }
  const double r = std::sqrt(s2 / d);
  return -kAckleyA * std::exp(-kAckleyB * r) - std::exp(sc / d) + kAckleyA + std::numbers::e;
}

void ackley_gradient(std::span<const double> x, std::span<double> out) {
  const double d = static_cast<double>(x.size());
  double s2 = 0.0, sc = 0.0;
  for (double xi : x) {
    s2 += xi * xi;
    sc += std::cos(kAckleyC * xi);
  }
  const double r = std::sqrt(s2 / d);
  if (r == 0.0) {
    // non-differentiable point; by convention the gradient is zero there
    for (auto& g : out) g = 0.0;
    return;
  }
  const double radial = kAckleyA * kAckleyB * std::exp(-kAckleyB * r) / (d * r);
  const double osc = std::exp(sc / d) * kAckleyC / d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = radial * x[i] + osc * std::sin(kAckleyC * x[i]);
  }
}

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

ObjectiveFunction make_objective(const std::string& name, int dimension) {
  if (dimension < 1) throw config_error("objective: dimension must be positive");
  ObjectiveFunction obj;
  obj.name = name;
  obj.dimension = dimension;
  if (name == "quadratic") {
    obj.value = [](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      return 0.5 * s;
    };
    obj.analytic_gradient = [](std::span<const double> x, std::span<double> g) {
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i];
    };
    obj.known_minimizer = std::vector<double>(dimension, 0.0);
    obj.known_minimum = 0.0;
  } else if (name == "doublewell") {
    obj.value = [](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      const double t = s - 1.0;
      return t * t;
    };
    obj.analytic_gradient = [](std::span<const double> x, std::span<double> g) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = 4.0 * (s - 1.0) * x[i];
    };
    obj.known_minimum = 0.0;  // minimizers not unique (the unit sphere)
  } else if (name == "ackley") {
    obj.value = ackley_value;
    obj.analytic_gradient = ackley_gradient;
    obj.known_minimizer = std::vector<double>(dimension, 0.0);
    obj.known_minimum = 0.0;
  } else {
    throw config_error("objective: unknown name \"" + name +
                       "\" (expected quadratic, doublewell or ackley)");
  }
  return obj;
}

double evaluate(const ObjectiveFunction& obj, std::span<const double> x) {
  const double v = obj.value(x);
  if (!std::isfinite(v)) {
    throw numeric_error("objective \"" + obj.name + "\" is not finite at " + format_point(x));
  }
  return v;
}

void gradient(const ObjectiveFunction& obj, std::span<const double> x, std::span<double> out) {
  if (obj.has_gradient()) {
    obj.analytic_gradient(x, out);
  } else {
    std::vector<double> xp(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      xp[i] = x[i] + h;
      const double fp = evaluate(obj, xp);
      xp[i] = x[i] - h;
      const double fm = evaluate(obj, xp);
      xp[i] = x[i];
      out[i] = (fp - fm) / (2.0 * h);
    }
  }
  for (double g : out) {
    if (!std::isfinite(g)) {
      throw numeric_error("gradient of \"" + obj.name + "\" is not finite at " + format_point(x));
    }
  }
}

DensityField gibbs_density(const ObjectiveFunction& obj, double temperature, const Grid1D& grid) {
  if (!(temperature > 0.0)) throw config_error("gibbs_density: temperature must be positive");
  if (obj.dimension != 1) throw config_error("gibbs_density: grid quadrature is 1D only");
  DensityField f{grid, std::vector<double>(grid.cells)};
  double fmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.cells; ++i) {
    const double x = grid.center(i);
    f.values[i] = evaluate(obj, std::span<const double>(&x, 1));
    fmin = std::min(fmin, f.values[i]);
  }
  for (double& v : f.values) v = std::exp(-(v - fmin) / temperature);
  if (!(f.mass() > 0.0)) {
    throw numeric_error("gibbs_density: all weights underflowed; evaluate in the log domain");
  }
  f.normalize();
  return f;
}

}  // namespace kinanneal
