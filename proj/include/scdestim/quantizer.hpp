#ifndef SCDESTIM_QUANTIZER_HPP
#define SCDESTIM_QUANTIZER_HPP

#include <cstdint>

#include "scdestim/schedule.hpp"

namespace scdestim {

/// Per-edge channel parameters, shared by both directions of the edge.
struct ChannelParams {
  double nu = 0.0;       // event-trigger coefficient, in [0, 1/2]
  double b = 1.0;        // dither scale, > 0
  StepSchedule alpha;    // fusion step size alpha_k

  /// Throws std::invalid_argument when nu is outside [0, 1/2] or b <= 0.
  void validate() const;
};

/// What one sensor emits towards one neighbor at one tick.
struct ChannelEvent {
  int s = -1;              // encoded sign, +-1
  bool triggered = false;  // transmitted this tick
  int s_hat = 0;           // as decoded by the receiver, {-1, 0, +1}
  int bits = 0;            // bits on the wire, {0, 1}
};

/// Distribution function of Lap(0, 1).
double laplace_cdf(double x);

/// Expanding trigger threshold nu * b * ln k.
double threshold(double nu, double b, std::uint64_t k);

/// Encode and trigger for one directed channel. `dither` is the sender's
/// Lap(0, 1) draw for this tick, shared across all its outgoing channels.
/// Ties |z| == threshold do not transmit; z == 0 encodes as -1.
ChannelEvent channel_step(double x, const ChannelParams& params, std::uint64_t k, double dither);

/// E[s_hat | x]: F((x - C)/b) - F((-x - C)/b).
double fusion_g(double x, double nu, double b, std::uint64_t k);

/// P{transmit | x}: F((x - C)/b) + F((-x - C)/b).
double trigger_probability(double x, double nu, double b, std::uint64_t k);

}  // namespace scdestim

#endif  // SCDESTIM_QUANTIZER_HPP
