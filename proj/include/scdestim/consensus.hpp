#ifndef SCDESTIM_CONSENSUS_HPP
#define SCDESTIM_CONSENSUS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "scdestim/graph.hpp"
#include "scdestim/schedule.hpp"

namespace scdestim {

/// Dither law for the signal-comparison consensus protocol. Only the
/// quantile is needed to sample; the CDF is kept alongside so callers can
/// check empirical behaviour against it.
struct DitherDistribution {
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;

  static DitherDistribution laplace();
};

struct ConsensusConfig {
  Topology topology;
  double threshold_c = 0.0;
  StepSchedule step;
  DitherDistribution dither = DitherDistribution::laplace();
  std::vector<double> initial_states;

  /// Throws std::invalid_argument on size mismatch or a polynomial step
  /// schedule outside 1/2 < gamma <= 1.
  void validate() const;
};

/// Binary message {0, 1}: 1 iff state + dither < threshold.
int consensus_encode(double state, double dither, double threshold_c);

/// One protocol step: encodes the previous states with the previous
/// tick's dithers, then x_i += alpha_k * sum_j a_ij (s_i - s_j).
std::vector<double> consensus_step(std::span<const double> previous_states, std::uint64_t k,
                                   const ConsensusConfig& config,
                                   std::span<const double> previous_dithers);

struct ConsensusCheckpoint {
  std::uint64_t k = 0;
  double max_deviation = 0.0;  // max_i |x_i - initial average|
  double mean_state = 0.0;
  double state_sum = 0.0;
};

/// Runs `horizon` steps, recording at geometric checkpoints (ratio 1.2,
/// always including 0 and the horizon). Rejects disconnected graphs.
std::vector<ConsensusCheckpoint> run_consensus(const ConsensusConfig& config, std::uint64_t horizon,
                                               std::uint64_t seed, std::uint64_t run_index = 0);

}  // namespace scdestim

#endif  // SCDESTIM_CONSENSUS_HPP
