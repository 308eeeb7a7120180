#ifndef SCDESTIM_HARNESS_EXPERIMENT_HPP
#define SCDESTIM_HARNESS_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scdestim/estimator.hpp"
#include "scdestim/harness/config.hpp"

namespace scdestim::harness {

/// Per-checkpoint arithmetic means over runs.
struct AggregatePoint {
  std::uint64_t k = 0;
  double mse_mean = 0.0;
  std::vector<double> sensor_sq_error;
  double bits_total = 0.0;
  double global_rate = 0.0;
  std::vector<double> channel_rates;
};

struct ExperimentResult {
  std::vector<RunMetrics> runs;  // ordered by run index
  std::vector<AggregatePoint> aggregate;
  std::vector<DirectedChannel> channels;
};

/// Worker count from SC_DESTIM_WORKERS, else hardware concurrency.
unsigned default_workers();

/// Element-wise mean of the runs' checkpoints, summed in run order.
std::vector<AggregatePoint> aggregate_runs(std::span<const RunMetrics> runs);

/// n_runs independent runs (run index r uses streams (seed, r, ...)),
/// executed on up to `workers` threads. Throws std::invalid_argument when
/// a validator rejects the config.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers = default_workers());

struct SweepEntry {
  double nu = 0.0;
  ExperimentConfig config;
  ExperimentResult result;
};

/// One experiment per nu with every edge set to nu and gamma = 1 - nu.
/// Rejects nu outside [0, 1/2).
std::vector<SweepEntry> sweep(const ExperimentConfig& config, std::span<const double> nu_values,
                              unsigned workers = default_workers());

/// Column header shared by per-run and aggregate CSVs.
std::vector<std::string> csv_columns(std::size_t n_sensors, std::span<const DirectedChannel> channels);

std::string run_csv(const ExperimentConfig& config, const RunMetrics& run);
std::string aggregate_csv(const ExperimentConfig& config, const ExperimentResult& result);
std::string sweep_comparison_csv(const ExperimentConfig& base, std::span<const SweepEntry> entries);

/// Writes run_<r>.csv, aggregate.csv, plot_mse.svg, plot_rate.svg and
/// report.txt under `dir`.
void write_experiment(const std::filesystem::path& dir, const ExperimentConfig& config,
                      const ExperimentResult& result);

/// Writes each entry under dir/nu_<value>/ plus comparison.csv,
/// plot_sweep_mse.svg, plot_sweep_rate.svg and report.txt.
void write_sweep(const std::filesystem::path& dir, const ExperimentConfig& base,
                 std::span<const SweepEntry> entries);

/// 17 significant digits; lossless for doubles.
std::string format_double(double v);

}  // namespace scdestim::harness

#endif  // SCDESTIM_HARNESS_EXPERIMENT_HPP
