#include "kinanneal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinanneal/errors.hpp"

namespace kinanneal {

namespace {

void require_same_grid(const DensityField& f, const DensityField& g, const char* who) {
  if (!(f.grid == g.grid)) throw numeric_error(std::string(who) + ": grid mismatch");
}

int clamp_cell(const Grid1D& grid, double x) {
  const int i = static_cast<int>(std::floor((x - grid.lower) / grid.dx()));
  return std::clamp(i, 0, grid.cells - 1);
}

}  // namespace

HistogramDensity histogram_density(std::span<const double> samples, const Grid1D& grid) {
  if (samples.empty()) throw numeric_error("histogram_density: no samples");
  HistogramDensity out{DensityField{grid, std::vector<double>(grid.cells, 0.0)}, 0.0};
  std::size_t clipped = 0;
  for (double x : samples) {
    if (x < grid.lower || x > grid.upper) ++clipped;
    out.density.values[clamp_cell(grid, x)] += 1.0;
  }
  const double norm = static_cast<double>(samples.size()) * grid.dx();
  for (double& v : out.density.values) v /= norm;
  out.clipped_fraction = static_cast<double>(clipped) / static_cast<double>(samples.size());
  return out;
}

DensityField rebin_density(const DensityField& fine, const Grid1D& coarse) {
  DensityField out{coarse, std::vector<double>(coarse.cells, 0.0)};
  const double fine_dx = fine.grid.dx();
  for (int i = 0; i < fine.grid.cells; ++i) {
    out.values[clamp_cell(coarse, fine.grid.center(i))] += fine.values[i] * fine_dx;
  }
  for (double& v : out.values) v /= coarse.dx();
  return out;
}

double relative_entropy(const DensityField& f, const DensityField& g) {
  require_same_grid(f, g, "relative_entropy");
  double s = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) {
    const double fi = f.values[i];
    if (fi == 0.0) continue;  // 0 log 0 = 0
    if (!(g.values[i] > 0.0)) {
      throw numeric_error("relative_entropy: g vanishes where f > 0 (cell " + std::to_string(i) +
                          ")");
    }
    s += fi * std::log(fi / g.values[i]);
  }
  return s * f.grid.dx();
}

double l1_distance(const DensityField& f, const DensityField& g) {
  require_same_grid(f, g, "l1_distance");
  double s = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) s += std::abs(f.values[i] - g.values[i]);
  return s * f.grid.dx();
}

double relative_entropy_std_error(const DensityField& f, const DensityField& g,
                                  std::size_t n_samples) {
  require_same_grid(f, g, "relative_entropy_std_error");
  if (n_samples == 0) return 0.0;
  // delta method on the multinomial cell counts
  const double dx = f.grid.dx();
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) {
    const double p = f.values[i] * dx;
    if (p <= 0.0) continue;
    const double l = std::log(f.values[i] / g.values[i]);
    m1 += p * l;
    m2 += p * l * l;
  }
  return std::sqrt(std::max(m2 - m1 * m1, 0.0) / static_cast<double>(n_samples));
}

double l1_std_error(const DensityField& f, std::size_t n_samples) {
  if (n_samples == 0) return 0.0;
  const double dx = f.grid.dx();
  double v = 0.0;
  for (double fi : f.values) {
    const double p = fi * dx;
    v += p * (1.0 - p);
  }
  return std::sqrt(std::max(v, 0.0) / static_cast<double>(n_samples));
}

std::vector<double> laplace_probe(const DensityField& g, const ObjectiveFunction& obj,
                                  std::span<const double> temperatures) {
  if (obj.dimension != 1) throw config_error("laplace_probe: 1D only");
  const int n = g.grid.cells;
  std::vector<double> fvals(n);
  double fmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double x = g.grid.center(i);
    fvals[i] = evaluate(obj, std::span<const double>(&x, 1));
    if (g.values[i] > 0.0) fmin = std::min(fmin, fvals[i]);
  }
  if (!std::isfinite(fmin)) throw numeric_error("laplace_probe: g has empty support");
  std::vector<double> out;
  out.reserve(temperatures.size());
  for (double T : temperatures) {
    if (!(T > 0.0)) throw config_error("laplace_probe: temperatures must be positive");
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (g.values[i] > 0.0) s += g.values[i] * std::exp(-(fvals[i] - fmin) / T);
    }
    out.push_back(fmin - T * std::log(s * g.grid.dx()));
  }
  return out;
}

double detailed_balance_residual(const ObjectiveFunction& obj, double temperature, double x,
                                 double x_new) {
  const double fa = evaluate(obj, std::span<const double>(&x, 1));
  const double fb = evaluate(obj, std::span<const double>(&x_new, 1));
  const double fref = std::min(fa, fb);
  const double wa = std::exp(-(fa - fref) / temperature);
  const double wb = std::exp(-(fb - fref) / temperature);
  return acceptance_from_delta(fb - fa, temperature) * wa -
         acceptance_from_delta(fa - fb, temperature) * wb;
}

double symmetry_identity_residual(const std::function<double(double, double)>& g,
                                  const std::function<double(double)>& xi_pdf, double sigma) {
  // double midpoint quadrature; the integrands are assumed to decay within
  // the windows below
  constexpr double x_half = 10.0;
  constexpr int nx = 2000;
  constexpr double xi_half = 8.0;
  constexpr int nxi = 1600;
  const double dx = 2.0 * x_half / nx;
  const double dxi = 2.0 * xi_half / nxi;
  double total = 0.0;
  for (int k = 0; k < nxi; ++k) {
    const double xi = -xi_half + (k + 0.5) * dxi;
    const double w = xi_pdf(xi) * dxi;
    if (w == 0.0) continue;
    double inner = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double x = -x_half + (i + 0.5) * dx;
      const double xp = x + sigma * xi;
      inner += g(xp, x) - g(x, xp);
    }
    total += w * inner * dx;
  }
  return std::abs(total);
}

double symmetry_identity_residual(const std::function<double(double, double)>& g,
                                  const SelectionDensity& p, double sigma) {
  return symmetry_identity_residual(g, [&p](double xi) { return p.pdf1(xi); }, sigma);
}

double success_rate(std::span<const double> finals, int dimension,
                    std::span<const double> x_star, double tol) {
  if (dimension < 1 || x_star.size() != static_cast<std::size_t>(dimension)) {
    throw config_error("success_rate: dimension mismatch");
  }
  if (finals.empty() || finals.size() % dimension != 0) {
    throw config_error("success_rate: finals must hold n x dimension values");
  }
  const std::size_t n = finals.size() / dimension;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r) {
    bool ok = true;
    for (int d = 0; d < dimension; ++d) {
      if (std::abs(finals[r * dimension + d] - x_star[d]) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace kinanneal
