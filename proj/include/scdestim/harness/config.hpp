#ifndef SCDESTIM_HARNESS_CONFIG_HPP
#define SCDESTIM_HARNESS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "scdestim/estimator.hpp"

namespace scdestim::harness {

struct ExperimentSettings {
  std::uint64_t horizon = 100000;
  double checkpoint_ratio = 1.2;
  std::uint64_t runs = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::vector<double> nu_sweep;  // empty: single setting
  bool allow_invalid_stepsizes = false;
};

struct ExperimentConfig {
  EstimatorConfig estimator;
  ExperimentSettings experiment;
};

/// Thrown for malformed config documents (unknown keys, wrong types,
/// inconsistent sizes). The message names the offending path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * JSON config schema (all keys optional unless noted; unknown keys are
 * rejected):
 *
 *   preset:     "paper-sec7" | "paper-sweep"   (only with "experiment")
 *   topology:   { n_sensors, edges: [[i, j, weight], ...] }         required
 *   model:      { theta: [...], sensors: [ {h | h_periodic | h_table,
 *                 noise_std}, ... ], noise_factor: [[...]] }        required
 *   channels:   { default: {nu, b, alpha1, gamma},
 *                 edges: [ {edge: [i, j], nu, b, alpha1, gamma}, ... ] }
 *   beta:       { default: {beta1, exponent},
 *                 sensors: [ {sensor, beta1, exponent}, ... ] }
 *   initial_estimates: [[...], ...]
 *   excitation_window: p
 *   experiment: { horizon, checkpoint_ratio, runs, seed, output_dir,
 *                 nu_sweep: [...], allow_invalid_stepsizes }
 *
 * Indices are 1-based. Per-edge and per-sensor entries override the
 * defaults; every edge and sensor must end up with a value.
 */
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Fully explicit form (per-edge channels, per-sensor beta); reading it
/// back yields an identical document.
nlohmann::json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Accepts a preset name or a path to a JSON file.
ExperimentConfig load_config_or_preset(const std::string& spec);

/// 8 sensors, theta = (1, -1), noise std 0.1, b = 1/2, nu = 1/4,
/// alpha = 5 / k^{3/4}, beta = 5 / k; 20 runs to k = 10^5.
ExperimentConfig paper_sec7_preset();

/// paper-sec7 with nu in {0, 1/9, 2/9, 3/9, 4/9}, alpha = 5 / k^{1 - nu};
/// 50 runs per nu.
ExperimentConfig paper_sweep_preset();

/// Copy with every edge set to the given nu and gamma = 1 - nu.
ExperimentConfig with_uniform_nu(const ExperimentConfig& config, double nu);

/// FNV-1a of the canonical JSON dump without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace scdestim::harness

#endif  // SCDESTIM_HARNESS_CONFIG_HPP
