#include "kinanneal/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinanneal/diagnostics.hpp"
#include "kinanneal/errors.hpp"

namespace kinanneal {

namespace {

// b(w) = w / (e^w - 1); b(-w) = b(w) + w
double bernoulli_b(double w) {
  if (std::abs(w) < 1e-8) return 1.0 - 0.5 * w + w * w / 12.0;
  return w / std::expm1(w);
}

// Exponential-fitting stepper: caches F on the grid and the interface
// weights for the current temperature. The flux through interface k
//   J_k = (T/dx) (b(-w_k) f_{k+1} - b(w_k) f_k),  w_k = (F_{k+1} - F_k)/T,
// vanishes identically on exp(-F/T), so the discrete Gibbs density is a
// fixed point. The update is written as a convex combination of f_{i-1},
// f_i, f_{i+1}, which keeps it nonnegative whenever the diagonal
// coefficient stays nonnegative.
class FpStepper {
 public:
  FpStepper(const Grid1D& grid, const ObjectiveFunction& obj) : grid_(grid) {
    fvals_.resize(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
      const double x = grid.center(i);
      fvals_[i] = evaluate(obj, std::span<const double>(&x, 1));
    }
    b_.resize(grid.cells - 1);
    bneg_.resize(grid.cells - 1);
  }

  void set_temperature(double temperature) {
    if (temperature == temperature_) return;
    temperature_ = temperature;
    max_coef_ = 0.0;
    const int n = grid_.cells;
    for (int k = 0; k + 1 < n; ++k) {
      const double w = (fvals_[k + 1] - fvals_[k]) / temperature;
      b_[k] = bernoulli_b(w);
      bneg_[k] = b_[k] + w;
    }
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      if (i + 1 < n) c += b_[i];
      if (i > 0) c += bneg_[i - 1];
      max_coef_ = std::max(max_coef_, c);
    }
  }

  double stable_dt() const {
    const double dx = grid_.dx();
    return 0.9 * dx * dx / (temperature_ * max_coef_);
  }

  // One explicit substep of width h; false when positivity fails.
  bool try_step(const std::vector<double>& f, std::vector<double>& out, double h) const {
    const int n = grid_.cells;
    const double dx = grid_.dx();
    const double c = h * temperature_ / (dx * dx);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double stay = 1.0;
      double gain = 0.0;
      if (i + 1 < n) {
        stay -= c * b_[i];
        gain += c * bneg_[i] * f[i + 1];
      }
      if (i > 0) {
        stay -= c * bneg_[i - 1];
        gain += c * b_[i - 1] * f[i - 1];
      }
      const double v = stay * f[i] + gain;
      if (v < 0.0) ok = false;
      out[i] = v;
    }
    return ok;
  }

  // Advances f by `width`, halving the substep on positivity failures.
  void advance(std::vector<double>& f, double width, double h_start) const {
    double remaining = width;
    double h = h_start;
    int halvings = 0;
    std::vector<double> next(f.size());
    while (remaining > 1e-300) {
      const double hh = std::min(h, remaining);
      if (try_step(f, next, hh)) {
        f.swap(next);
        remaining -= hh;
      } else {
        if (++halvings > 20) {
          throw numeric_error("fp_step: positivity lost after 20 halvings; grid too coarse");
        }
        h *= 0.5;
      }
    }
  }

  const std::vector<double>& objective_values() const { return fvals_; }

 private:
  Grid1D grid_;
  std::vector<double> fvals_;
  std::vector<double> b_, bneg_;
  double temperature_ = std::numeric_limits<double>::quiet_NaN();
  double max_coef_ = 0.0;
};

DensityField gibbs_from_values(const Grid1D& grid, const std::vector<double>& fvals,
                               double temperature) {
  DensityField g{grid, std::vector<double>(grid.cells)};
  const double fmin = *std::min_element(fvals.begin(), fvals.end());
  for (int i = 0; i < grid.cells; ++i) g.values[i] = std::exp(-(fvals[i] - fmin) / temperature);
  g.normalize();
  return g;
}

struct KineticQuadrature {
  int reach = 0;                 // offsets -reach..reach
  std::vector<double> weights;   // p(k dx / sigma)/sigma * dx for k = 0..reach
  std::vector<double> fvals;

  KineticQuadrature(const DensityField& f, const ObjectiveFunction& obj, double sigma,
                    const SelectionDensity& p) {
    const Grid1D& grid = f.grid;
    const double dx = grid.dx();
    if (obj.dimension != 1) throw config_error("kinetic quadrature: 1D only");
    if (!(sigma >= 2.0 * dx)) {
      throw numeric_error("kinetic quadrature: sigma < 2 dx, kernel unresolved by the grid");
    }
    reach = std::min(static_cast<int>(std::floor(p.support_radius() * sigma / dx)),
                     grid.cells - 1);
    weights.resize(reach + 1);
    for (int k = 0; k <= reach; ++k) weights[k] = p.pdf1(k * dx / sigma) / sigma * dx;
    fvals.resize(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
      const double x = grid.center(i);
      fvals[i] = evaluate(obj, std::span<const double>(&x, 1));
    }
  }
};

}  // namespace

double fp_stable_dt(const Grid1D& grid, const ObjectiveFunction& obj, double temperature) {
  FpStepper stepper(grid, obj);
  stepper.set_temperature(temperature);
  return stepper.stable_dt();
}

DensityField fp_step(const DensityField& f, const FPConfig& cfg, double t) {
  if (!(f.grid == cfg.grid)) throw config_error("fp_step: density grid differs from config grid");
  FpStepper stepper(cfg.grid, cfg.objective);
  stepper.set_temperature(cfg.schedule.temperature(t));
  const double width = cfg.dt_pde > 0.0 ? cfg.dt_pde : stepper.stable_dt();
  DensityField out = f;
  stepper.advance(out.values, width, width);
  return out;
}

FPResult fp_solve(const DensityField& f0, const FPConfig& cfg, double t_final,
                  std::span<const double> snapshot_times, int series_points) {
  if (!(f0.grid == cfg.grid)) throw config_error("fp_solve: density grid differs from config grid");
  if (t_final < 0.0) throw config_error("fp_solve: t_final must be nonnegative");

  FpStepper stepper(cfg.grid, cfg.objective);
  FPResult result;
  result.density = f0;

  std::vector<double> snaps(snapshot_times.begin(), snapshot_times.end());
  std::sort(snaps.begin(), snaps.end());

  // merge series times and snapshot times into one ordered event list
  std::vector<double> events;
  if (series_points > 0 && t_final > 0.0) {
    for (int k = 0; k <= series_points; ++k) events.push_back(t_final * k / series_points);
  } else {
    events.push_back(0.0);
    events.push_back(t_final);
  }
  events.insert(events.end(), snaps.begin(), snaps.end());
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  auto is_series_time = [&](double t) {
    if (series_points <= 0 || t_final <= 0.0) return t == 0.0 || t == t_final;
    const double k = t / t_final * series_points;
    return std::abs(k - std::round(k)) < 1e-9;
  };
  auto record = [&](double t) {
    const double temperature = cfg.schedule.temperature(t);
    if (is_series_time(t)) {
      const DensityField g = gibbs_from_values(cfg.grid, stepper.objective_values(), temperature);
      result.series.push_back(
          {t, relative_entropy(result.density, g), l1_distance(result.density, g)});
    }
    if (std::binary_search(snaps.begin(), snaps.end(), t)) {
      result.snapshots.emplace_back(t, result.density);
    }
  };

  double t = 0.0;
  stepper.set_temperature(cfg.schedule.temperature(0.0));
  for (double ev : events) {
    while (t < ev - 1e-13) {
      stepper.set_temperature(cfg.schedule.temperature(t));
      const double h = cfg.dt_pde > 0.0 ? cfg.dt_pde : stepper.stable_dt();
      const double width = std::min(h, ev - t);
      stepper.advance(result.density.values, width, width);
      t += width;
    }
    t = ev;
    record(t);
  }
  return result;
}

std::vector<double> kinetic_operator_apply(const DensityField& f, const ObjectiveFunction& obj,
                                           double temperature, double sigma,
                                           const SelectionDensity& p) {
  if (!(temperature > 0.0)) throw config_error("kinetic operator: temperature must be positive");
  const KineticQuadrature q(f, obj, sigma, p);
  const int n = f.grid.cells;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const int klo = std::max(-q.reach, -i);
    const int khi = std::min(q.reach, n - 1 - i);
    double acc = 0.0;
    for (int k = klo; k <= khi; ++k) {
      const int j = i + k;
      const double w = q.weights[std::abs(k)];
      // gain from j into i minus loss from i into j
      acc += w * (acceptance_from_delta(q.fvals[i] - q.fvals[j], temperature) * f.values[j] -
                  acceptance_from_delta(q.fvals[j] - q.fvals[i], temperature) * f.values[i]);
    }
    out[i] = acc;
  }
  return out;
}

namespace {

template <typename HFun>
double dissipation_quadrature(const DensityField& f, const ObjectiveFunction& obj,
                              double temperature, double sigma, const SelectionDensity& p,
                              HFun&& h) {
  if (!(temperature > 0.0)) throw config_error("dissipation: temperature must be positive");
  const KineticQuadrature q(f, obj, sigma, p);
  const int n = f.grid.cells;
  const DensityField equilibrium = gibbs_from_values(f.grid, q.fvals, temperature);
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    u[i] = std::max(f.values[i], 1e-300) / equilibrium.values[i];
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int klo = std::max(-q.reach, -i);
    const int khi = std::min(q.reach, n - 1 - i);
    double acc = 0.0;
    for (int k = klo; k <= khi; ++k) {
      const int j = i + k;
      acc += q.weights[std::abs(k)] *
             acceptance_from_delta(q.fvals[j] - q.fvals[i], temperature) * h(u[j], u[i]);
    }
    total += acc * equilibrium.values[i];
  }
  return 0.5 * total * f.grid.dx();
}

}  // namespace

double entropy_dissipation(const DensityField& f, const ObjectiveFunction& obj, double temperature,
                           double sigma, const SelectionDensity& p) {
  return dissipation_quadrature(f, obj, temperature, sigma, p, [](double a, double b) {
    return (a - b) * (std::log(a) - std::log(b));
  });
}

double dirichlet_form(const DensityField& f, const ObjectiveFunction& obj, double temperature,
                      double sigma, const SelectionDensity& p) {
  return dissipation_quadrature(f, obj, temperature, sigma, p, [](double a, double b) {
    const double d = a - b;
    return d * d;
  });
}

double convex_entropy(const DensityField& f, const DensityField& equilibrium, ConvexEntropy phi) {
  if (!(f.grid == equilibrium.grid)) throw config_error("convex_entropy: grid mismatch");
  double total = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) {
    const double g = equilibrium.values[i];
    if (g <= 0.0) throw numeric_error("convex_entropy: equilibrium must be strictly positive");
    const double u = f.values[i] / g;
    double val = 0.0;
    if (phi == ConvexEntropy::shannon) {
      val = (u > 0.0 ? u * std::log(u) : 0.0) - u + 1.0;  // smooth extension at u = 0
    } else {
      val = 0.5 * (u - 1.0) * (u - 1.0);
    }
    total += g * val;
  }
  return total * f.grid.dx();
}

}  // namespace kinanneal
