#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kinanneal/diagnostics.hpp"
#include "kinanneal/samplers.hpp"

namespace kinanneal {

struct ExperimentConfig {
  ChainConfig chain;
  std::size_t runs = 50000;
  // Pooling times for the diagnostics; t_final is always included.
  std::vector<double> snapshot_times;
  Grid1D histogram_grid{-4.0, 4.0, 160};
  // Fine grid used for the Gibbs reference, rebinned onto histogram_grid.
  Grid1D reference_grid{-6.0, 6.0, 2400};
  double success_tol = 0.5;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct SnapshotDensity {
  double time;
  DensityField empirical;
  DensityField gibbs;  // instantaneous Gibbs reference at T(time)
  double clipped_fraction = 0.0;
};

struct EnsembleResult {
  int dimension = 1;
  std::vector<double> finals;  // runs x dimension, ordered by run index
  DiagnosticSeries series;
  std::vector<SnapshotDensity> densities;
  std::vector<std::uint64_t> run_seeds;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

// Runs cfg.runs independent chains with streams derived from
// (chain.seed, run index). The aggregation is an ordered fold over run
// indices, so the result is bit-identical across thread counts and
// scheduling orders.
EnsembleResult run_ensemble(const ExperimentConfig& cfg);

// Writes manifest.json, series.csv and density_t{t}.csv under dir and
// returns the manifest path. A ".incomplete" marker is present while the
// write is in progress. Re-running the manifest reproduces the CSVs
// byte for byte.
std::filesystem::path write_results(const EnsembleResult& res, const ExperimentConfig& cfg,
                                    const std::filesystem::path& dir);

ExperimentConfig read_manifest(const std::filesystem::path& manifest_path);

}  // namespace kinanneal
