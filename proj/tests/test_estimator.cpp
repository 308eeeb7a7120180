#include "scdestim/estimator.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "scdestim/checkpoints.hpp"
#include "scdestim/harness/config.hpp"

namespace {

using namespace scdestim;

Eigen::MatrixXd row(double a, double b) {
  Eigen::MatrixXd m(1, 2);
  m << a, b;
  return m;
}

// Two sensors on one edge, n = 2, H1 = [1 0], H2 = [0 1].
EstimatorConfig pair_config(double nu = 0.25, double b = 0.5) {
  EstimatorConfig c;
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}};
  c.topology = Topology::build(2, e);
  c.channels = {ChannelParams{nu, b, StepSchedule::polynomial(5.0, 0.75)}};
  c.beta.assign(2, StepSchedule::polynomial(5.0, 1.0));
  c.model.theta = Eigen::Vector2d(1.0, -1.0);
  c.model.sensors = {{HSchedule::constant(row(1, 0)), 0.1}, {HSchedule::constant(row(0, 1)), 0.1}};
  return c;
}

EstimatorConfig preset() { return harness::paper_sec7_preset().estimator; }

TEST(Estimator, CompressIndex) {
  EXPECT_EQ(compress_index(1, 2), 1u);
  EXPECT_EQ(compress_index(2, 2), 2u);
  EXPECT_EQ(compress_index(3, 2), 1u);
  for (std::uint64_t k = 0; k < 50; ++k) {
    std::vector<int> hits(5, 0);
    for (std::uint64_t t = k + 1; t <= k + 5; ++t) ++hits[compress_index(t, 5) - 1];
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Estimator, GoldenTick) {
  // Inputs and expected outputs evaluated by hand, step by step, outside
  // this code base. Tick k = 6 compresses coordinate 2; C = 0.22396993...
  const auto config = pair_config();
  auto state = initial_state(config);
  state.k = 5;
  state.estimates = {Eigen::Vector2d(0.3, -0.2), Eigen::Vector2d(-0.4, 0.6)};
  const std::vector<double> dithers = {0.1, -2.0};
  const std::vector<Eigen::VectorXd> ys = {Eigen::VectorXd::Constant(1, 1.05),
                                           Eigen::VectorXd::Constant(1, -0.93)};
  EXPECT_NEAR(threshold(0.25, 0.5, 6), 0.22396993365350687, 1e-16);
  tick_with(state, config, dithers, ys);
  EXPECT_EQ(state.k, 6u);
  // 1 -> 2: z = -0.2 + 0.05, below C.
  EXPECT_EQ(state.last_events[0].s, -1);
  EXPECT_FALSE(state.last_events[0].triggered);
  EXPECT_EQ(state.last_events[0].s_hat, 0);
  // 2 -> 1: z = 0.6 - 1.0 = -0.4.
  EXPECT_EQ(state.last_events[1].s, -1);
  EXPECT_TRUE(state.last_events[1].triggered);
  EXPECT_EQ(state.last_events[1].s_hat, -1);
  EXPECT_NEAR(state.estimates[0](0), 0.925, 1e-14);
  EXPECT_NEAR(state.estimates[0](1), -1.1619435452253932, 1e-14);
  EXPECT_NEAR(state.estimates[1](0), -0.4, 1e-14);
  EXPECT_NEAR(state.estimates[1](1), -1.5463345064874048, 1e-14);
}

TEST(Estimator, NoTriggerIsInnovationPlusDrift) {
  // n = 1 and zero dithers: |x| < C at k = 100, so nothing is sent.
  EstimatorConfig c;
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}};
  c.topology = Topology::build(2, e);
  c.channels = {ChannelParams{0.5, 0.5, StepSchedule::polynomial(2.0, 0.5)}};
  c.beta.assign(2, StepSchedule::polynomial(3.0, 1.0));
  c.model.theta = Eigen::VectorXd::Constant(1, 0.7);
  c.model.sensors = {{HSchedule::constant(Eigen::MatrixXd::Ones(1, 1)), 0.0},
                     {HSchedule::constant(Eigen::MatrixXd::Constant(1, 1, 2.0)), 0.0}};
  auto state = initial_state(c);
  state.k = 99;
  state.estimates = {Eigen::VectorXd::Constant(1, 0.2), Eigen::VectorXd::Constant(1, -0.3)};
  const std::vector<double> d = {0.0, 0.0};
  const std::vector<Eigen::VectorXd> ys = {Eigen::VectorXd::Constant(1, 0.9),
                                           Eigen::VectorXd::Constant(1, 1.1)};
  tick_with(state, c, d, ys);
  EXPECT_EQ(state.last_events[0].bits + state.last_events[1].bits, 0);
  const double alpha = 2.0 / 10.0, beta = 3.0 / 100.0;
  const double want1 = 0.2 + beta * (0.9 - 0.2) - alpha * fusion_g(0.2, 0.5, 0.5, 100);
  const double want2 = -0.3 + beta * 2.0 * (1.1 - 2.0 * -0.3) - alpha * fusion_g(-0.3, 0.5, 0.5, 100);
  EXPECT_NEAR(state.estimates[0](0), want1, 1e-15);
  EXPECT_NEAR(state.estimates[1](0), want2, 1e-15);
}

TEST(Estimator, FixedPointWithoutFusionOrNoise) {
  auto c = preset();
  for (auto& ch : c.channels) ch.alpha = StepSchedule::custom([](std::uint64_t) { return 0.0; });
  for (auto& s : c.model.sensors) s.noise_std = 0.0;
  c.initial_estimates.assign(8, c.model.theta);
  auto state = initial_state(c);
  auto streams = RunStreams::make(3, 0, 8);
  for (int t = 0; t < 500; ++t) tick(state, c, streams);
  for (const auto& est : state.estimates) EXPECT_EQ(est, c.model.theta);
}

TEST(Estimator, UpdateTouchesOnlyCompressedCoordinateBeyondInnovation) {
  // With beta = 0 the only change is along e_l, bounded by 2 sum_j alpha a_ij.
  auto c = preset();
  c.beta.assign(8, StepSchedule::custom([](std::uint64_t) { return 0.0; }));
  auto state = initial_state(c);
  auto streams = RunStreams::make(4, 0, 8);
  for (int t = 0; t < 300; ++t) {
    const auto before = state.estimates;
    tick(state, c, streams);
    const auto l = static_cast<Eigen::Index>(compress_index(state.k, 2) - 1);
    for (std::size_t i = 0; i < 8; ++i) {
      const Eigen::VectorXd diff = state.estimates[i] - before[i];
      EXPECT_EQ(diff(1 - l), 0.0);
      double bound = 0.0;
      for (const auto& nb : c.topology.neighbors(i)) bound += 2.0 * c.fusion_coefficient(i, nb.index, state.k);
      EXPECT_LE(std::abs(diff(l)), bound + 1e-12);
    }
  }
}

TEST(Estimator, EventsAreConsistent) {
  const auto c = preset();
  auto state = initial_state(c);
  auto streams = RunStreams::make(5, 0, 8);
  for (int t = 0; t < 2000; ++t) {
    tick(state, c, streams);
    for (const auto& ev : state.last_events) {
      EXPECT_TRUE(ev.s == 1 || ev.s == -1);
      EXPECT_EQ(ev.s_hat, ev.triggered ? ev.s : 0);
      EXPECT_EQ(ev.bits, ev.triggered ? 1 : 0);
    }
  }
}

TEST(Estimator, FusionIsSymmetricUnderSensorSwap) {
  // Mirror image: swapping the sensors, their estimates, dithers and
  // observations swaps the results.
  auto c = pair_config();
  c.model.sensors[1].h = HSchedule::constant(row(1, 0));
  auto a = initial_state(c), b = initial_state(c);
  a.k = b.k = 10;
  a.estimates = {Eigen::Vector2d(0.5, 0.1), Eigen::Vector2d(-0.7, 0.9)};
  b.estimates = {a.estimates[1], a.estimates[0]};
  const std::vector<double> da = {0.3, -0.8}, db = {-0.8, 0.3};
  const std::vector<Eigen::VectorXd> ya = {Eigen::VectorXd::Constant(1, 0.2), Eigen::VectorXd::Constant(1, 1.4)};
  const std::vector<Eigen::VectorXd> yb = {ya[1], ya[0]};
  tick_with(a, c, da, ya);
  tick_with(b, c, db, yb);
  EXPECT_EQ(a.estimates[0], b.estimates[1]);
  EXPECT_EQ(a.estimates[1], b.estimates[0]);
}

TEST(Estimator, RunIsDeterministic) {
  const auto c = preset();
  const auto cps = geometric_checkpoints(3000);
  const auto r1 = run(c, cps, 9, 2);
  const auto r2 = run(c, cps, 9, 2);
  ASSERT_EQ(r1.checkpoints.size(), r2.checkpoints.size());
  for (std::size_t i = 0; i < r1.checkpoints.size(); ++i) {
    EXPECT_EQ(r1.checkpoints[i].mse_mean, r2.checkpoints[i].mse_mean);
    EXPECT_EQ(r1.checkpoints[i].channel_bits, r2.checkpoints[i].channel_bits);
  }
  const auto other = run(c, cps, 9, 3);
  EXPECT_NE(other.checkpoints.back().mse_mean, r1.checkpoints.back().mse_mean);
}

TEST(Estimator, HorizonZero) {
  const auto c = preset();
  const std::vector<std::uint64_t> cps = {0};
  const auto r = run(c, cps, 1);
  ASSERT_EQ(r.checkpoints.size(), 1u);
  EXPECT_DOUBLE_EQ(r.checkpoints[0].mse_mean, 2.0);
  EXPECT_EQ(r.checkpoints[0].bits_total, 0u);
  EXPECT_EQ(r.checkpoints[0].global_rate, 0.0);
}

TEST(Estimator, ZeroNuSendsEveryTick) {
  const auto c = harness::with_uniform_nu(harness::paper_sec7_preset(), 0.0).estimator;
  const auto r = run(c, geometric_checkpoints(2000), 1);
  for (const auto& cp : r.checkpoints) {
    for (double rate : cp.channel_rates) EXPECT_EQ(rate, 1.0);
    EXPECT_EQ(cp.global_rate, 1.0);
  }
}

TEST(Estimator, FirstTickTransmitsOnEveryChannel) {
  const auto c = preset();
  const std::vector<std::uint64_t> cps = {1};
  const auto r = run(c, cps, 6);
  for (auto bits : r.checkpoints[0].channel_bits) EXPECT_EQ(bits, 1u);
}

TEST(Estimator, RunRejectsBadSetups) {
  auto c = preset();
  const std::vector<std::uint64_t> cps = {1, 5};
  const std::vector<std::uint64_t> unsorted = {5, 1};
  EXPECT_THROW(run(c, unsorted, 1), std::invalid_argument);
  for (auto& ch : c.channels) ch.alpha = StepSchedule::polynomial(5.0, 0.5);
  EXPECT_THROW(run(c, cps, 1), std::invalid_argument);
  RunOptions allow;
  allow.allow_invalid_stepsizes = true;
  EXPECT_NO_THROW(run(c, cps, 1, 0, allow));

  auto blind = preset();
  for (auto& s : blind.model.sensors) s.h = HSchedule::constant(row(1, 0));
  EXPECT_THROW(run(blind, cps, 1), std::invalid_argument);
}

TEST(Estimator, NonFiniteGuard) {
  auto c = pair_config();
  auto state = initial_state(c);
  const std::vector<double> d = {0.0, 0.0};
  const std::vector<Eigen::VectorXd> ys = {Eigen::VectorXd::Constant(1, std::numeric_limits<double>::infinity()),
                                           Eigen::VectorXd::Constant(1, 0.0)};
  try {
    tick_with(state, c, d, ys);
    FAIL() << "expected NonFiniteEstimate";
  } catch (const NonFiniteEstimate& err) {
    EXPECT_EQ(err.tick(), 1u);
    EXPECT_EQ(err.sensor(), 0u);
  }
}

}  // namespace
