// sc-destim: command-line front end for the binary-valued distributed
// estimation simulator.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scdestim/consensus.hpp"
#include "scdestim/harness/analysis.hpp"
#include "scdestim/harness/config.hpp"
#include "scdestim/harness/experiment.hpp"
#include "scdestim/version.hpp"

namespace {

using namespace scdestim;
using namespace scdestim::harness;

struct ExperimentFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> horizon;
  std::optional<std::string> output;
  unsigned workers = default_workers();
  bool allow_invalid = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("-c,--config", f.config, "Config file or preset (paper-sec7, paper-sweep)")->required();
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--runs", f.runs, "Number of Monte Carlo runs");
  cmd->add_option("--horizon", f.horizon, "Number of ticks");
  cmd->add_option("-o,--output", f.output, "Output directory");
  cmd->add_option("--workers", f.workers, "Parallel runs (default: $SC_DESTIM_WORKERS or core count)");
  cmd->add_flag("--allow-invalid-stepsizes", f.allow_invalid, "Run even if the step-size conditions fail");
}

ExperimentConfig resolve(const ExperimentFlags& f) {
  ExperimentConfig cfg = load_config_or_preset(f.config);
  if (f.seed) cfg.experiment.seed = *f.seed;
  if (f.runs) cfg.experiment.runs = *f.runs;
  if (f.horizon) cfg.experiment.horizon = *f.horizon;
  if (f.output) cfg.experiment.output_dir = *f.output;
  if (f.allow_invalid) cfg.experiment.allow_invalid_stepsizes = true;
  if (cfg.experiment.runs == 0) throw std::invalid_argument("--runs must be >= 1");
  return cfg;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Topology consensus_topology(const std::string& name, std::size_t n) {
  if (name == "paper") return paper_topology();
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({i, i + 1, 1.0});
  if (name == "ring" && n > 2) edges.push_back({n, 1, 1.0});
  else if (name != "ring" && name != "path") throw std::invalid_argument("unknown topology preset '" + name + "'");
  return Topology::build(n, edges);
}

int cmd_run(const ExperimentFlags& f) {
  const auto cfg = resolve(f);
  const auto result = run_experiment(cfg, f.workers);
  write_experiment(cfg.experiment.output_dir, cfg, result);
  std::cout << fmt::format("wrote {} runs to {}\nfinal aggregate MSE {}  B(k) {}\n", result.runs.size(),
                           cfg.experiment.output_dir, format_double(result.aggregate.back().mse_mean),
                           format_double(result.aggregate.back().global_rate));
  return 0;
}

int cmd_sweep(const ExperimentFlags& f, const std::string& nu_text) {
  auto cfg = resolve(f);
  const auto nus = nu_text.empty() ? cfg.experiment.nu_sweep : parse_list(nu_text);
  if (nus.empty()) throw std::invalid_argument("sweep: give --nu or a config with experiment.nu_sweep");
  cfg.experiment.nu_sweep = nus;
  const auto entries = sweep(cfg, nus, f.workers);
  write_sweep(cfg.experiment.output_dir, cfg, entries);
  for (const auto& e : entries) {
    std::cout << fmt::format("nu={:.4f}  final MSE {}  B(k) {}\n", e.nu, format_double(e.result.aggregate.back().mse_mean),
                             format_double(e.result.aggregate.back().global_rate));
  }
  return 0;
}

int cmd_validate(const ExperimentFlags& f) {
  const auto cfg = resolve(f);
  const auto report = validate_experiment(cfg);
  std::cout << report.to_text();
  return report.passed() ? 0 : 1;
}

int cmd_predict(const ExperimentFlags& f) {
  const auto cfg = resolve(f);
  std::cout << predict(cfg).to_text();
  return 0;
}

struct ConsensusFlags {
  std::size_t n = 5;
  std::string topology = "ring";
  double threshold = 2.0;
  double alpha1 = 1.0;
  double gamma = 1.0;
  std::uint64_t horizon = 1000000;
  std::uint64_t seed = 1;
  std::string initial;
  std::string output;
};

int cmd_consensus(const ConsensusFlags& f) {
  ConsensusConfig cfg;
  cfg.topology = consensus_topology(f.topology, f.n);
  cfg.threshold_c = f.threshold;
  cfg.step = StepSchedule::polynomial(f.alpha1, f.gamma);
  if (f.initial.empty()) {
    cfg.initial_states.resize(cfg.topology.n_sensors());
    std::iota(cfg.initial_states.begin(), cfg.initial_states.end(), 0.0);
  } else {
    cfg.initial_states = parse_list(f.initial);
  }
  const auto traj = run_consensus(cfg, f.horizon, f.seed);

  std::string text = fmt::format("# sc-destim {}\n# seed={}\nk,D_k,mean_state\n", kVersion, f.seed);
  for (const auto& cp : traj) {
    text += fmt::format("{},{},{}\n", cp.k, format_double(cp.max_deviation), format_double(cp.mean_state));
  }
  if (f.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(f.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + f.output);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed estimation over binary-valued, event-triggered channels"};
  app.set_version_flag("--version", scdestim::kVersion);
  app.require_subcommand(1);

  ExperimentFlags run_flags, sweep_flags, validate_flags, predict_flags;
  std::string nu_text;
  ConsensusFlags cons;

  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
  add_experiment_flags(run, run_flags);
  auto* sw = app.add_subcommand("sweep", "Sweep the event-trigger coefficient nu (gamma = 1 - nu)");
  add_experiment_flags(sw, sweep_flags);
  sw->add_option("--nu", nu_text, "Comma-separated nu values");
  auto* val = app.add_subcommand("validate", "Check connectivity, excitation and step-size conditions");
  add_experiment_flags(val, validate_flags);
  auto* pred = app.add_subcommand("predict", "Print closed-form rate and data-rate predictions");
  add_experiment_flags(pred, predict_flags);

  auto* con = app.add_subcommand("consensus", "Run the standalone signal-comparison consensus protocol");
  con->add_option("-n,--agents", cons.n, "Number of agents (ring/path)");
  con->add_option("--topology", cons.topology, "ring, path or paper");
  con->add_option("-C,--threshold", cons.threshold, "Comparison threshold C");
  con->add_option("--alpha1", cons.alpha1, "Step size alpha_1");
  con->add_option("--gamma", cons.gamma, "Step exponent gamma");
  con->add_option("--horizon", cons.horizon, "Number of steps");
  con->add_option("--seed", cons.seed, "Master seed");
  con->add_option("--initial", cons.initial, "Comma-separated initial states (default 0,1,...)");
  con->add_option("-o,--output", cons.output, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (sw->parsed()) return cmd_sweep(sweep_flags, nu_text);
    if (val->parsed()) return cmd_validate(validate_flags);
    if (pred->parsed()) return cmd_predict(predict_flags);
    if (con->parsed()) return cmd_consensus(cons);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
