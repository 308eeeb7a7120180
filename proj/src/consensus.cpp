#include "scdestim/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scdestim/checkpoints.hpp"
#include "scdestim/quantizer.hpp"
#include "scdestim/rng.hpp"

namespace scdestim {

DitherDistribution DitherDistribution::laplace() {
  return {[](double x) { return laplace_cdf(x); },
          [](double u) { return laplace_quantile(u, 0.0, 1.0); }};
}

void ConsensusConfig::validate() const {
  if (initial_states.size() != topology.n_sensors()) {
    throw std::invalid_argument("consensus: need one initial state per agent");
  }
  if (!dither.quantile) {
    throw std::invalid_argument("consensus: dither distribution has no quantile");
  }
  if (step.is_polynomial() && !(step.exponent() > 0.5 && step.exponent() <= 1.0)) {
    throw std::invalid_argument(
        "consensus: step exponent must satisfy 1/2 < gamma <= 1 (sum alpha = inf, sum alpha^2 < inf)");
  }
}

int consensus_encode(double state, double dither, double threshold_c) {
  return state + dither < threshold_c ? 1 : 0;
}

std::vector<double> consensus_step(std::span<const double> previous_states, std::uint64_t k,
                                   const ConsensusConfig& config,
                                   std::span<const double> previous_dithers) {
  const std::size_t n = config.topology.n_sensors();
  if (previous_states.size() != n || previous_dithers.size() != n) {
    throw std::invalid_argument("consensus_step: state/dither size mismatch");
  }
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = consensus_encode(previous_states[i], previous_dithers[i], config.threshold_c);
  }
  const double alpha = config.step.at(k);
  std::vector<double> next(previous_states.begin(), previous_states.end());
  for (std::size_t i = 0; i < n; ++i) {
    double drive = 0.0;
    for (const auto& nb : config.topology.neighbors(i)) {
      drive += nb.weight * static_cast<double>(s[i] - s[nb.index]);
    }
    next[i] += alpha * drive;
  }
  return next;
}

namespace {

ConsensusCheckpoint snapshot(std::uint64_t k, std::span<const double> x, double average) {
  ConsensusCheckpoint cp;
  cp.k = k;
  cp.state_sum = std::accumulate(x.begin(), x.end(), 0.0);
  cp.mean_state = cp.state_sum / static_cast<double>(x.size());
  for (double v : x) cp.max_deviation = std::max(cp.max_deviation, std::abs(v - average));
  return cp;
}

}  // namespace

std::vector<ConsensusCheckpoint> run_consensus(const ConsensusConfig& config, std::uint64_t horizon,
                                               std::uint64_t seed, std::uint64_t run_index) {
  config.validate();
  if (!check_connected(config.topology)) {
    throw std::invalid_argument("consensus: communication graph is not connected");
  }
  const std::size_t n = config.topology.n_sensors();
  std::vector<Stream> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    streams.emplace_back(seed, StreamId{run_index, i, StreamPurpose::dither});
  }

  std::vector<double> x = config.initial_states;
  const double average = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const auto ticks = geometric_checkpoints(horizon, kDefaultCheckpointRatio, true);

  std::vector<ConsensusCheckpoint> out;
  out.reserve(ticks.size());
  std::size_t next_cp = 0;
  if (ticks.front() == 0) {
    out.push_back(snapshot(0, x, average));
    ++next_cp;
  }

  std::vector<double> dithers(n);
  for (std::uint64_t k = 1; k <= horizon; ++k) {
    // Dithers drawn here belong to tick k-1 and feed the messages used at k.
    for (std::size_t i = 0; i < n; ++i) dithers[i] = config.dither.quantile(streams[i].uniform());
    x = consensus_step(x, k, config, dithers);
    if (next_cp < ticks.size() && ticks[next_cp] == k) {
      out.push_back(snapshot(k, x, average));
      ++next_cp;
    }
  }
  return out;
}

}  // namespace scdestim
