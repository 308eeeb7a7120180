#ifndef SCDESTIM_THEORY_HPP
#define SCDESTIM_THEORY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scdestim/graph.hpp"
#include "scdestim/quantizer.hpp"
#include "scdestim/schedule.hpp"

namespace scdestim {

/// Absolute tolerance for the equalities nu + gamma == 1 and bounds on it.
inline constexpr double kExponentTolerance = 1e-12;

struct StepsizeReport {
  bool supported = true;  // false when a schedule is not polynomial
  bool passed = false;
  std::vector<std::string> violations;  // one line per failed condition
};

/**
 * Summability conditions for almost sure convergence on polynomial
 * schedules alpha_1 / k^gamma and beta_1 / k^gamma_beta:
 *   (i)   sum alpha^2 < inf      <=> gamma > 1/2 on every edge
 *   (ii)  sum beta^2 < inf       <=> gamma_beta > 1/2 on every sensor
 *   (iii) sum min(alpha/k^nu, beta) = inf
 *                                <=> gamma + nu <= 1 and gamma_beta <= 1
 * Edges and sensors are named 1-based in the violation messages.
 */
StepsizeReport validate_stepsizes(const Topology& topology, std::span<const ChannelParams> channels,
                                  std::span<const StepSchedule> betas);

/// min over edges of nu/2 + gamma. Throws std::invalid_argument naming the
/// first edge with gamma outside (1/2, 1] or nu + gamma > 1.
double compute_h(const Topology& topology, std::span<const ChannelParams> channels);

struct RateExponentInputs {
  double delta = 0.0;    // persistent-excitation constant
  double lambda2 = 0.0;  // algebraic connectivity
  double theta_l1 = 0.0;
  double h_bar = 0.0;
  std::size_t n_sensors = 0;
  std::size_t dim = 0;
  std::vector<double> beta1;            // per sensor
  std::vector<ChannelParams> channels;  // per edge, polynomial alpha
};

/// The exponent a of the almost sure rate. Branch 1 (no edge with
/// nu + gamma = 1): delta * min beta1 / N. Branch 2 mixes in
/// m = min over those edges of alpha1 * exp(-|theta|_1 / b) / b:
///   delta lambda2 beta m / (2 N n Hbar^2 beta + N lambda2 m).
double compute_a(const RateExponentInputs& in);

enum class RateClass { poly_a, log_over, sqrtlog_over };

std::string to_string(RateClass c);

struct RatePrediction {
  double h = 0.0;
  double a = 0.0;
  RateClass rate_class = RateClass::poly_a;
  double error_slope_loglog = 0.0;  // slope of log squared error vs log k
};

RatePrediction predict_rate(double h, double a);

struct LocalRateBound {
  double raw = 1.0;      // exp(|theta|_1 / b) / ((1 - nu) k^nu)
  double clamped = 1.0;  // min(raw, 1)
  bool sharp = false;    // a > h - 1/2, where the leading constant is proven
};

/// Leading term of the local data-rate bound. nu == 0 gives exactly 1.
LocalRateBound predict_local_rate_bound(double nu, double b, double theta_l1, double h, double a,
                                        std::uint64_t k);

struct SuggestedStepsizes {
  std::vector<double> gamma;  // per edge, 1 - nu
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double h = 0.0;             // 1 - max(nu) / 2
};

/// gamma_ij = 1 - nu_ij with alpha1 = beta1 = scale. Throws if any
/// nu >= 1/2 or nu < 0.
SuggestedStepsizes suggest_stepsizes(std::span<const double> nu, double scale);

/// Rate prediction for a suggested schedule: `base` supplies the graph and
/// model constants, its channel b values are kept and its step sizes are
/// replaced by the suggestion.
RatePrediction predict_suggested_rate(const SuggestedStepsizes& suggestion,
                                      std::span<const double> nu, RateExponentInputs base);

}  // namespace scdestim

#endif  // SCDESTIM_THEORY_HPP
