#ifndef SCDESTIM_HARNESS_ANALYSIS_HPP
#define SCDESTIM_HARNESS_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scdestim/harness/config.hpp"
#include "scdestim/theory.hpp"

namespace scdestim::harness {

/// Least-squares slope of ln(value) against ln(k) over the points with
/// k in [k_lo, k_hi]. Needs at least 5 such points, all values > 0.
double fit_loglog_slope(std::span<const double> k, std::span<const double> values, double k_lo, double k_hi);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
  std::string to_text() const;
};

/// Connectivity, cooperative excitation, step-size conditions and, for
/// sweeps, the range of every nu.
ValidationReport validate_experiment(const ExperimentConfig& config);

struct EdgeBound {
  std::size_t i = 0;  // 1-based
  std::size_t j = 0;
  LocalRateBound bound;
};

struct TheoryReport {
  StepsizeReport stepsizes;
  double lambda2 = 0.0;
  double delta = 0.0;
  double h_bar = 0.0;
  bool rate_theorem_applies = false;  // h and a computable, beta exponent 1
  std::string rate_note;
  RatePrediction rate;
  double min_nu_slope = 0.0;  // B(k) decays like k^{-min nu}
  std::uint64_t bound_k = 0;
  std::vector<EdgeBound> local_bounds;

  std::string to_text() const;
};

/// Evaluates the closed-form predictions for a config; local data-rate
/// bounds are evaluated at k = horizon (or 1 if horizon is 0).
TheoryReport predict(const ExperimentConfig& config);

}  // namespace scdestim::harness

#endif  // SCDESTIM_HARNESS_ANALYSIS_HPP
