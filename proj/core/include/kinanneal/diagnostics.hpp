#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinanneal/kernels.hpp"

namespace kinanneal {

struct HistogramDensity {
  DensityField density;
  double clipped_fraction = 0.0;
};

// Counts per cell / (n * dx). Samples outside the grid are assigned to the
// nearest boundary cell and reported through clipped_fraction.
HistogramDensity histogram_density(std::span<const double> samples, const Grid1D& grid);

// Mass-conserving restriction of a fine density onto a coarser grid; fine
// cells whose center falls outside go to the nearest boundary cell, matching
// the histogram clipping convention.
DensityField rebin_density(const DensityField& fine, const Grid1D& coarse);

// Kullback-Leibler divergence sum_i f_i log(f_i / g_i) dx with 0 log 0 = 0.
// Throws numeric_error where g vanishes but f does not, or on grid mismatch.
double relative_entropy(const DensityField& f, const DensityField& g);

double l1_distance(const DensityField& f, const DensityField& g);

// Delta-method standard errors when f is a histogram of n_samples draws.
double relative_entropy_std_error(const DensityField& f, const DensityField& g,
                                  std::size_t n_samples);
double l1_std_error(const DensityField& f, std::size_t n_samples);

// -T log( sum_i g_i exp(-F(x_i)/T) dx ) for each temperature, evaluated with
// the exponent shifted by min F over the support of g.
std::vector<double> laplace_probe(const DensityField& g, const ObjectiveFunction& obj,
                                  std::span<const double> temperatures);

// B(x -> x') w(x) - B(x' -> x) w(x') with unnormalized Gibbs weights
// w = exp(-(F - min F)/T); zero up to rounding for every pair.
double detailed_balance_residual(const ObjectiveFunction& obj, double temperature, double x,
                                 double x_new);

// | <int g(x', x) dx> - <int g(x, x') dx> | with x' = x + sigma xi, by double
// midpoint quadrature. Near zero whenever the xi-density is symmetric.
double symmetry_identity_residual(const std::function<double(double, double)>& g,
                                  const std::function<double(double)>& xi_pdf, double sigma);
double symmetry_identity_residual(const std::function<double(double, double)>& g,
                                  const SelectionDensity& p, double sigma);

// Fraction of finals (row-major n x dimension) within sup-norm tol of x_star.
double success_rate(std::span<const double> finals, int dimension,
                    std::span<const double> x_star, double tol);

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> entropy_std_error;
  std::vector<double> l1;
  std::vector<double> clipped_fraction;
  std::vector<double> success;  // NaN entries when no known minimizer

  std::string method;
  double eps = 0.0;
  std::string schedule;
  std::size_t seed_count = 0;
};

}  // namespace kinanneal
