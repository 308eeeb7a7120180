#ifndef SCDESTIM_ESTIMATOR_HPP
#define SCDESTIM_ESTIMATOR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "scdestim/accounting.hpp"
#include "scdestim/graph.hpp"
#include "scdestim/observation.hpp"
#include "scdestim/quantizer.hpp"
#include "scdestim/rng.hpp"
#include "scdestim/schedule.hpp"

namespace scdestim {

/// l in {1..n} with k = n q + l; the compressing direction is e_l.
std::size_t compress_index(std::uint64_t k, std::size_t n);

struct EstimatorConfig {
  Topology topology;
  std::vector<ChannelParams> channels;  // per edge, indexed like topology.edges()
  std::vector<StepSchedule> beta;       // per sensor
  ObservationModel model;
  std::vector<Eigen::VectorXd> initial_estimates;  // empty means zeros
  std::size_t excitation_window = 1;               // p for the excitation check

  /// Shape and range checks; throws std::invalid_argument.
  void validate() const;

  /// alpha_{ij,k} a_ij as applied by sensor i to the message from j.
  double fusion_coefficient(std::size_t i, std::size_t j, std::uint64_t k) const;
};

struct NetworkState {
  std::uint64_t k = 0;
  std::vector<Eigen::VectorXd> estimates;
  std::vector<ChannelEvent> last_events;  // per directed channel, see directed_channels()
};

NetworkState initial_state(const EstimatorConfig& config);

/// Raised when an estimate stops being finite.
class NonFiniteEstimate : public std::runtime_error {
 public:
  NonFiniteEstimate(std::uint64_t tick, std::size_t sensor);
  std::uint64_t tick() const { return tick_; }
  std::size_t sensor() const { return sensor_; }

 private:
  std::uint64_t tick_;
  std::size_t sensor_;
};

/// Per-sensor dither and observation streams of one run.
struct RunStreams {
  std::vector<Stream> dither;
  std::vector<Stream> observation;

  static RunStreams make(std::uint64_t seed, std::uint64_t run_index, std::size_t n_sensors);
};

/**
 * Advances every sensor from tick k-1 to k with caller-supplied dithers
 * (one per sensor) and observations (one per sensor). All sends of the
 * tick complete before any fusion. The events of the tick are left in
 * state.last_events.
 */
void tick_with(NetworkState& state, const EstimatorConfig& config, std::span<const double> dithers,
               std::span<const Eigen::VectorXd> observations);

/// Same as tick_with, drawing dithers and observations from the streams.
void tick(NetworkState& state, const EstimatorConfig& config, RunStreams& streams);

struct CheckpointMetrics {
  std::uint64_t k = 0;
  double mse_mean = 0.0;                  // (1/N) sum_i |theta_hat_i - theta|^2
  std::vector<double> sensor_sq_error;    // |theta_hat_i - theta|^2
  std::uint64_t bits_total = 0;
  double global_rate = 0.0;               // B(k); 0 at k = 0
  std::vector<std::uint64_t> channel_bits;
  std::vector<double> channel_rates;      // B_ij(k) per directed channel
};

struct RunMetrics {
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  std::vector<DirectedChannel> channels;
  std::vector<CheckpointMetrics> checkpoints;
};

struct RunOptions {
  bool allow_invalid_stepsizes = false;
};

/// Runs to the last of `checkpoints` (strictly increasing), recording
/// metrics at each. Rejects disconnected graphs, failed excitation and,
/// unless overridden, step sizes outside the convergence conditions.
RunMetrics run(const EstimatorConfig& config, std::span<const std::uint64_t> checkpoints,
               std::uint64_t seed, std::uint64_t run_index = 0, const RunOptions& options = {});

}  // namespace scdestim

#endif  // SCDESTIM_ESTIMATOR_HPP
