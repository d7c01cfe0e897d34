#pragma once

#include <span>
#include <utility>
#include <vector>

#include "kinanneal/kernels.hpp"
#include "kinanneal/schedule.hpp"

namespace kinanneal {

struct FPConfig {
  Grid1D grid;
  // 0 selects the largest explicit step that keeps the scheme monotone at
  // the current temperature.
  double dt_pde = 0.0;
  CoolingSchedule schedule;
  ObjectiveFunction objective;
};

// Largest explicit time step for which the Chang-Cooper update is a convex
// combination of neighboring cells (with a 0.9 safety factor).
double fp_stable_dt(const Grid1D& grid, const ObjectiveFunction& obj, double temperature);

// Advances f by cfg.dt_pde with the exponential-fitting (Chang-Cooper) flux
// discretization of  df/dt = d/dx(F' f) + T d2f/dx2  and zero-flux
// boundaries. T is frozen at T(t) for the whole step. Mass is conserved to
// rounding, and the discrete Gibbs density at T(t) is an exact fixed point
// of the flux. Substeps are halved whenever positivity would fail; more
// than 20 halvings raises numeric_error.
DensityField fp_step(const DensityField& f, const FPConfig& cfg, double t);

struct FPSeriesPoint {
  double t;
  double entropy;      // H(f | gibbs(T(t)))
  double l1_to_gibbs;
};

struct FPResult {
  DensityField density;
  std::vector<FPSeriesPoint> series;
  std::vector<std::pair<double, DensityField>> snapshots;
};

// Integrates from f0 to t_final, recording the entropy series at
// series_points evenly spaced times and the density at each snapshot time.
FPResult fp_solve(const DensityField& f0, const FPConfig& cfg, double t_final,
                  std::span<const double> snapshot_times = {}, int series_points = 50);

// L_F(f) by midpoint quadrature of the gain and loss integrals, truncated to
// |xi| <= p.support_radius(); moves that leave the grid are dropped from
// both terms, so the discrete operator conserves mass exactly. Requires
// sigma >= 2 dx.
std::vector<double> kinetic_operator_apply(const DensityField& f, const ObjectiveFunction& obj,
                                           double temperature, double sigma,
                                           const SelectionDensity& p);

// Entropy dissipation I_F[f] (log entropy) and Dirichlet form D_F[f]
// (quadratic entropy), by double midpoint quadrature of the kernel form.
// Both are sums of nonnegative terms. f is floored at 1e-300.
double entropy_dissipation(const DensityField& f, const ObjectiveFunction& obj,
                           double temperature, double sigma, const SelectionDensity& p);
double dirichlet_form(const DensityField& f, const ObjectiveFunction& obj, double temperature,
                      double sigma, const SelectionDensity& p);

enum class ConvexEntropy { shannon, quadratic };

// H_Phi(f | equilibrium) with Phi(u) = u log u - u + 1 or (u - 1)^2 / 2.
double convex_entropy(const DensityField& f, const DensityField& equilibrium, ConvexEntropy phi);

}  // namespace kinanneal
