#include "scdestim/harness/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "scdestim/checkpoints.hpp"
#include "scdestim/harness/analysis.hpp"
#include "scdestim/harness/plot.hpp"
#include "scdestim/version.hpp"

namespace scdestim::harness {

unsigned default_workers() {
  if (const char* env = std::getenv("SC_DESTIM_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<AggregatePoint> aggregate_runs(std::span<const RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
  const auto& first = runs.front().checkpoints;
  std::vector<AggregatePoint> agg(first.size());
  for (std::size_t c = 0; c < first.size(); ++c) {
    agg[c].k = first[c].k;
    agg[c].sensor_sq_error.assign(first[c].sensor_sq_error.size(), 0.0);
    agg[c].channel_rates.assign(first[c].channel_rates.size(), 0.0);
  }
  for (const auto& run : runs) {
    if (run.checkpoints.size() != first.size()) throw std::invalid_argument("aggregate_runs: ragged runs");
    for (std::size_t c = 0; c < first.size(); ++c) {
      const auto& m = run.checkpoints[c];
      auto& a = agg[c];
      a.mse_mean += m.mse_mean;
      for (std::size_t i = 0; i < m.sensor_sq_error.size(); ++i) a.sensor_sq_error[i] += m.sensor_sq_error[i];
      a.bits_total += static_cast<double>(m.bits_total);
      a.global_rate += m.global_rate;
      for (std::size_t i = 0; i < m.channel_rates.size(); ++i) a.channel_rates[i] += m.channel_rates[i];
    }
  }
  const double n = static_cast<double>(runs.size());
  for (auto& a : agg) {
    a.mse_mean /= n;
    for (auto& v : a.sensor_sq_error) v /= n;
    a.bits_total /= n;
    a.global_rate /= n;
    for (auto& v : a.channel_rates) v /= n;
  }
  return agg;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers) {
  const auto report = validate_experiment(config);
  if (!report.passed()) {
    if (!config.experiment.allow_invalid_stepsizes) {
      throw std::invalid_argument("config failed validation:\n" + report.to_text());
    }
    // Only the step-size conditions may be overridden.
    for (const auto& c : report.checks) {
      if (!c.passed && c.name.rfind("step-size", 0) != 0) {
        throw std::invalid_argument("config failed validation:\n" + report.to_text());
      }
    }
  }
  const auto& x = config.experiment;
  const auto ticks = geometric_checkpoints(x.horizon, x.checkpoint_ratio);
  RunOptions options;
  options.allow_invalid_stepsizes = x.allow_invalid_stepsizes;

  ExperimentResult result;
  result.runs.resize(x.runs);
  std::vector<std::exception_ptr> errors(x.runs);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t r = next++; r < x.runs; r = next++) {
      try {
        result.runs[r] = run(config.estimator, ticks, x.seed, r, options);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), x.runs));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.channels = directed_channels(config.estimator.topology);
  result.aggregate = aggregate_runs(result.runs);
  return result;
}

std::vector<SweepEntry> sweep(const ExperimentConfig& config, std::span<const double> nu_values,
                              unsigned workers) {
  if (nu_values.empty()) throw std::invalid_argument("sweep: no nu values");
  for (double nu : nu_values) {
    if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument(fmt::format("sweep: nu = {} outside [0, 1/2)", nu));
  }
  std::vector<SweepEntry> out;
  for (double nu : nu_values) {
    SweepEntry e;
    e.nu = nu;
    e.config = with_uniform_nu(config, nu);
    e.config.experiment.nu_sweep.clear();
    e.result = run_experiment(e.config, workers);
    out.push_back(std::move(e));
  }
  return out;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

std::string provenance(const ExperimentConfig& config) {
  return fmt::format("# sc-destim {}\n# seed={}\n# config_hash={}\n", kVersion, config.experiment.seed,
                     config_hash(config));
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) line += ',';
    line += cells[c];
  }
  line += '\n';
  return line;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string nu_label(double nu) { return fmt::format("{:.4f}", nu); }

}  // namespace

std::vector<std::string> csv_columns(std::size_t n_sensors, std::span<const DirectedChannel> channels) {
  std::vector<std::string> cols = {"k", "mse_mean"};
  for (std::size_t i = 0; i < n_sensors; ++i) cols.push_back(fmt::format("mse_sensor_{}", i + 1));
  cols.push_back("bits_total");
  cols.push_back("B_global");
  for (const auto& c : channels) cols.push_back(fmt::format("B_edge_{}_{}", c.from + 1, c.to + 1));
  return cols;
}

std::string run_csv(const ExperimentConfig& config, const RunMetrics& run) {
  std::string text = provenance(config) + fmt::format("# run={}\n", run.run_index);
  const std::size_t n = config.estimator.topology.n_sensors();
  text += join(csv_columns(n, run.channels));
  for (const auto& m : run.checkpoints) {
    std::vector<std::string> row = {std::to_string(m.k), format_double(m.mse_mean)};
    for (double v : m.sensor_sq_error) row.push_back(format_double(v));
    row.push_back(std::to_string(m.bits_total));
    row.push_back(format_double(m.global_rate));
    for (double v : m.channel_rates) row.push_back(format_double(v));
    text += join(row);
  }
  return text;
}

std::string aggregate_csv(const ExperimentConfig& config, const ExperimentResult& result) {
  std::string text = provenance(config) + fmt::format("# runs={}\n", result.runs.size());
  text += join(csv_columns(config.estimator.topology.n_sensors(), result.channels));
  for (const auto& a : result.aggregate) {
    std::vector<std::string> row = {std::to_string(a.k), format_double(a.mse_mean)};
    for (double v : a.sensor_sq_error) row.push_back(format_double(v));
    row.push_back(format_double(a.bits_total));
    row.push_back(format_double(a.global_rate));
    for (double v : a.channel_rates) row.push_back(format_double(v));
    text += join(row);
  }
  return text;
}

std::string sweep_comparison_csv(const ExperimentConfig& base, std::span<const SweepEntry> entries) {
  if (entries.empty()) throw std::invalid_argument("sweep_comparison_csv: no entries");
  std::string text = provenance(base);
  std::vector<std::string> cols = {"k"};
  for (const auto& e : entries) cols.push_back("MSE_nu" + nu_label(e.nu));
  for (const auto& e : entries) cols.push_back("B_nu" + nu_label(e.nu));
  text += join(cols);
  const auto& ref = entries.front().result.aggregate;
  for (std::size_t c = 0; c < ref.size(); ++c) {
    std::vector<std::string> row = {std::to_string(ref[c].k)};
    for (const auto& e : entries) row.push_back(format_double(e.result.aggregate.at(c).mse_mean));
    for (const auto& e : entries) row.push_back(format_double(e.result.aggregate.at(c).global_rate));
    text += join(row);
  }
  return text;
}

namespace {

Series mse_series(const std::string& name, const std::vector<AggregatePoint>& agg) {
  Series s{name, {}, {}};
  for (const auto& a : agg) {
    if (a.k == 0) continue;
    s.x.push_back(static_cast<double>(a.k));
    s.y.push_back(a.mse_mean);
  }
  return s;
}

Series rate_series(const std::string& name, const std::vector<AggregatePoint>& agg) {
  Series s{name, {}, {}};
  for (const auto& a : agg) {
    if (a.k == 0) continue;
    s.x.push_back(static_cast<double>(a.k));
    s.y.push_back(a.global_rate);
  }
  return s;
}

std::string experiment_summary(const ExperimentConfig& config, const ExperimentResult& result) {
  std::string text;
  const auto& agg = result.aggregate;
  const auto& last = agg.back();
  text += fmt::format("runs: {}\nhorizon: {}\nseed: {}\nconfig_hash: {}\n", result.runs.size(),
                      config.experiment.horizon, config.experiment.seed, config_hash(config));
  text += fmt::format("final aggregate MSE: {}\n", format_double(last.mse_mean));
  text += fmt::format("final global rate B(k): {}\n", format_double(last.global_rate));
  text += fmt::format("bits (mean total over directed channels): {}\n", format_double(last.bits_total));

  std::vector<double> ks, mse, rate;
  for (const auto& a : agg) {
    if (a.k == 0) continue;
    ks.push_back(static_cast<double>(a.k));
    mse.push_back(a.mse_mean);
    rate.push_back(a.global_rate);
  }
  const double hi = static_cast<double>(config.experiment.horizon);
  const double lo = hi / 100.0;
  try {
    text += fmt::format("fitted MSE log-log slope on [{}, {}]: {:.4f}\n", lo, hi, fit_loglog_slope(ks, mse, lo, hi));
    text += fmt::format("fitted B(k) log-log slope on [{}, {}]: {:.4f}\n", lo, hi, fit_loglog_slope(ks, rate, lo, hi));
  } catch (const std::invalid_argument& err) {
    text += fmt::format("slopes not fitted: {}\n", err.what());
  }
  return text;
}

}  // namespace

void write_experiment(const std::filesystem::path& dir, const ExperimentConfig& config,
                      const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  for (const auto& r : result.runs) write_file(dir / fmt::format("run_{}.csv", r.run_index), run_csv(config, r));
  write_file(dir / "aggregate.csv", aggregate_csv(config, result));

  const bool has_ticks = result.aggregate.back().k > 0;
  if (has_ticks) {
    emit_plot({mse_series("MSE", result.aggregate)},
              {"Network mean squared error", "k", "(1/N) sum |theta_hat - theta|^2", true, true},
              dir / "plot_mse.svg");
    emit_plot({rate_series("B(k)", result.aggregate)}, {"Global average data rate", "k", "B(k)", true, true},
              dir / "plot_rate.svg");
  }

  std::string report = "== experiment ==\n" + experiment_summary(config, result);
  report += "\n== validation ==\n" + validate_experiment(config).to_text();
  report += "\n== theory ==\n" + predict(config).to_text();
  write_file(dir / "report.txt", report);
}

void write_sweep(const std::filesystem::path& dir, const ExperimentConfig& base,
                 std::span<const SweepEntry> entries) {
  std::filesystem::create_directories(dir);
  std::vector<Series> mse, rate;
  std::string report = "== sweep ==\n";
  for (const auto& e : entries) {
    write_experiment(dir / ("nu_" + nu_label(e.nu)), e.config, e.result);
    mse.push_back(mse_series("nu=" + nu_label(e.nu), e.result.aggregate));
    rate.push_back(rate_series("nu=" + nu_label(e.nu), e.result.aggregate));
    report += fmt::format("\n-- nu = {} --\n", nu_label(e.nu)) + experiment_summary(e.config, e.result);
  }
  write_file(dir / "comparison.csv", sweep_comparison_csv(base, entries));
  if (entries.front().result.aggregate.back().k > 0) {
    emit_plot(mse, {"Convergence for different nu", "k", "MSE", true, true}, dir / "plot_sweep_mse.svg");
    emit_plot(rate, {"Average data rate for different nu", "k", "B(k)", true, true}, dir / "plot_sweep_rate.svg");
  }
  write_file(dir / "report.txt", report);
}

}  // namespace scdestim::harness
