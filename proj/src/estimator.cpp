#include "scdestim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "scdestim/theory.hpp"

namespace scdestim {

std::size_t compress_index(std::uint64_t k, std::size_t n) {
  if (k < 1 || n < 1) throw std::invalid_argument("compress_index needs k >= 1 and n >= 1");
  return static_cast<std::size_t>((k - 1) % n) + 1;
}

void EstimatorConfig::validate() const {
  const std::size_t n = topology.n_sensors();
  if (channels.size() != topology.edge_count()) {
    throw std::invalid_argument("estimator: one channel parameter set per edge required");
  }
  for (std::size_t e = 0; e < channels.size(); ++e) {
    try {
      channels[e].validate();
    } catch (const std::invalid_argument& err) {
      const auto& edge = topology.edges()[e];
      throw std::invalid_argument(fmt::format("edge ({}, {}): {}", edge.i + 1, edge.j + 1, err.what()));
    }
  }
  if (beta.size() != n) throw std::invalid_argument("estimator: one beta schedule per sensor required");
  model.validate();
  if (model.n_sensors() != n) {
    throw std::invalid_argument("estimator: observation model and topology disagree on sensor count");
  }
  if (!initial_estimates.empty()) {
    if (initial_estimates.size() != n) {
      throw std::invalid_argument("estimator: one initial estimate per sensor required");
    }
    for (const auto& v : initial_estimates) {
      if (v.size() != model.dim() || !v.allFinite()) {
        throw std::invalid_argument("estimator: initial estimates must be finite n-vectors");
      }
    }
  }
}

double EstimatorConfig::fusion_coefficient(std::size_t i, std::size_t j, std::uint64_t k) const {
  const long e = topology.edge_index(i, j);
  if (e < 0) return 0.0;
  const auto idx = static_cast<std::size_t>(e);
  return channels[idx].alpha.at(k) * topology.edges()[idx].weight;
}

NetworkState initial_state(const EstimatorConfig& config) {
  NetworkState s;
  const std::size_t n = config.topology.n_sensors();
  if (config.initial_estimates.empty()) {
    s.estimates.assign(n, Eigen::VectorXd::Zero(config.model.dim()));
  } else {
    s.estimates = config.initial_estimates;
  }
  s.last_events.assign(2 * config.topology.edge_count(), ChannelEvent{});
  return s;
}

NonFiniteEstimate::NonFiniteEstimate(std::uint64_t tick, std::size_t sensor)
    : std::runtime_error(fmt::format("non-finite estimate at tick {} on sensor {}", tick, sensor + 1)),
      tick_(tick),
      sensor_(sensor) {}

RunStreams RunStreams::make(std::uint64_t seed, std::uint64_t run_index, std::size_t n_sensors) {
  RunStreams rs;
  rs.dither.reserve(n_sensors);
  rs.observation.reserve(n_sensors);
  for (std::size_t i = 0; i < n_sensors; ++i) {
    rs.dither.emplace_back(seed, StreamId{run_index, i, StreamPurpose::dither});
    rs.observation.emplace_back(seed, StreamId{run_index, i, StreamPurpose::observation});
  }
  return rs;
}

void tick_with(NetworkState& state, const EstimatorConfig& config, std::span<const double> dithers,
               std::span<const Eigen::VectorXd> observations) {
  const Topology& g = config.topology;
  const std::size_t n_sensors = g.n_sensors();
  if (dithers.size() != n_sensors || observations.size() != n_sensors) {
    throw std::invalid_argument("tick: one dither and one observation per sensor required");
  }
  const std::uint64_t k = state.k + 1;
  const auto l = static_cast<Eigen::Index>(compress_index(k, static_cast<std::size_t>(config.model.dim())) - 1);

  std::vector<double> x(n_sensors);
  for (std::size_t i = 0; i < n_sensors; ++i) x[i] = state.estimates[i](l);

  // Sends. Edge e carries channel 2e (low -> high index) and 2e + 1.
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& p = config.channels[e];
    state.last_events[2 * e] = channel_step(x[edges[e].i], p, k, dithers[edges[e].i]);
    state.last_events[2 * e + 1] = channel_step(x[edges[e].j], p, k, dithers[edges[e].j]);
  }

  // Fusion and innovation; residuals use the pre-fusion estimate.
  for (std::size_t i = 0; i < n_sensors; ++i) {
    double fusion = 0.0;
    for (const auto& nb : g.neighbors(i)) {
      const auto& p = config.channels[nb.edge];
      const bool i_is_low = edges[nb.edge].i == i;
      const ChannelEvent& incoming = state.last_events[2 * nb.edge + (i_is_low ? 1 : 0)];
      fusion += p.alpha.at(k) * nb.weight *
                (static_cast<double>(incoming.s_hat) - fusion_g(x[i], p.nu, p.b, k));
    }
    const Eigen::MatrixXd& h = config.model.sensors[i].h.at(k);
    const Eigen::VectorXd residual = observations[i] - h * state.estimates[i];
    Eigen::VectorXd& est = state.estimates[i];
    est.noalias() += config.beta[i].at(k) * (h.transpose() * residual);
    est(l) += fusion;
    if (!est.allFinite()) throw NonFiniteEstimate(k, i);
  }
  state.k = k;
}

void tick(NetworkState& state, const EstimatorConfig& config, RunStreams& streams) {
  const std::size_t n = config.topology.n_sensors();
  std::vector<double> dithers(n);
  for (std::size_t i = 0; i < n; ++i) dithers[i] = streams.dither[i].laplace();
  const auto ys = observe_all(config.model, state.k + 1, streams.observation);
  tick_with(state, config, dithers, ys);
}

namespace {

CheckpointMetrics measure(const NetworkState& state, const EstimatorConfig& config,
                          const BitLedger& ledger) {
  CheckpointMetrics m;
  m.k = state.k;
  const std::size_t n = state.estimates.size();
  m.sensor_sq_error.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m.sensor_sq_error[i] = (state.estimates[i] - config.model.theta).squaredNorm();
    sum += m.sensor_sq_error[i];
  }
  m.mse_mean = sum / static_cast<double>(n);
  m.bits_total = ledger.total_bits();
  m.channel_bits.resize(ledger.channel_count());
  m.channel_rates.resize(ledger.channel_count());
  for (std::size_t c = 0; c < ledger.channel_count(); ++c) {
    m.channel_bits[c] = ledger.cumulative_channel(c);
    m.channel_rates[c] = ledger.ticks() == 0 ? 0.0 : ledger.channel_rate(c);
  }
  m.global_rate = ledger.ticks() == 0 ? 0.0 : ledger.global_rate();
  return m;
}

}  // namespace

RunMetrics run(const EstimatorConfig& config, std::span<const std::uint64_t> checkpoints,
               std::uint64_t seed, std::uint64_t run_index, const RunOptions& options) {
  config.validate();
  if (checkpoints.empty()) throw std::invalid_argument("run: no checkpoints");
  for (std::size_t c = 1; c < checkpoints.size(); ++c) {
    if (checkpoints[c] <= checkpoints[c - 1]) {
      throw std::invalid_argument("run: checkpoints must be strictly increasing");
    }
  }
  if (!check_connected(config.topology)) {
    throw std::invalid_argument("run: communication graph is not connected");
  }
  const std::size_t p = config.excitation_window;
  const auto excitation = check_excitation(config.model, p, excitation_horizon(config.model, p));
  if (!excitation.passed) {
    throw std::invalid_argument(
        fmt::format("run: cooperative excitation fails with window p = {} (delta = {})", p, excitation.delta));
  }
  const auto steps = validate_stepsizes(config.topology, config.channels, config.beta);
  if (!steps.passed) {
    std::string msg = "run: step sizes violate the convergence conditions";
    for (const auto& v : steps.violations) msg += "\n  " + v;
    if (!options.allow_invalid_stepsizes) throw std::invalid_argument(msg);
    std::cerr << "warning: " << msg << "\n";
  }

  RunMetrics out;
  out.seed = seed;
  out.run_index = run_index;
  out.channels = directed_channels(config.topology);
  out.checkpoints.reserve(checkpoints.size());

  NetworkState state = initial_state(config);
  RunStreams streams = RunStreams::make(seed, run_index, config.topology.n_sensors());
  BitLedger ledger(config.topology);
  std::vector<int> bits(ledger.channel_count());

  for (const std::uint64_t target : checkpoints) {
    while (state.k < target) {
      tick(state, config, streams);
      for (std::size_t c = 0; c < bits.size(); ++c) bits[c] = state.last_events[c].bits;
      ledger.record_bits(bits);
    }
    out.checkpoints.push_back(measure(state, config, ledger));
  }
  return out;
}

}  // namespace scdestim
