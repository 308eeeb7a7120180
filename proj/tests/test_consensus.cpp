#include "scdestim/consensus.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <gtest/gtest.h>

namespace {

constexpr double kRing5FinalDeviation = 0.0011729580325638977;

using scdestim::ConsensusConfig;
using scdestim::EdgeSpec;
using scdestim::StepSchedule;
using scdestim::Topology;

Topology ring(std::size_t n) {
  std::vector<EdgeSpec> e;
  for (std::size_t i = 1; i <= n; ++i) e.push_back({i, i % n + 1, 1.0});
  return Topology::build(n, e);
}

ConsensusConfig ring5() {
  ConsensusConfig c;
  c.topology = ring(5);
  c.threshold_c = 2.0;
  c.step = StepSchedule::polynomial(1.0, 1.0);
  c.initial_states = {0, 1, 2, 3, 4};
  return c;
}

TEST(Consensus, Encode) {
  EXPECT_EQ(scdestim::consensus_encode(0.0, 0.0, 1.0), 1);
  EXPECT_EQ(scdestim::consensus_encode(1.0, 0.0, 1.0), 0);
  EXPECT_EQ(scdestim::consensus_encode(2.0, -1.5, 1.0), 1);
}

TEST(Consensus, TwoAgents) {
  ConsensusConfig c;
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}};
  c.topology = Topology::build(2, e);
  c.threshold_c = 0.5;
  c.step = StepSchedule::polynomial(1.0, 1.0);
  c.initial_states = {0.0, 1.0};
  // Agent 1 encodes 1 (0 < 0.5), agent 2 encodes 0.
  const std::vector<double> prev = {0.0, 1.0}, d = {0.0, 0.0};
  const auto next = scdestim::consensus_step(prev, 4, c, d);
  EXPECT_DOUBLE_EQ(next[0], 0.25);
  EXPECT_DOUBLE_EQ(next[1], 0.75);
}

TEST(Consensus, ThreePathHandEvaluation) {
  ConsensusConfig c;
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}, {2, 3, 1.0}};
  c.topology = Topology::build(3, e);
  c.threshold_c = 1.0;
  c.step = StepSchedule::polynomial(1.0, 1.0);
  c.initial_states = {0, 1, 2};
  const std::vector<double> prev = {0, 1, 2}, d = {0, 0, 0};
  const auto next = scdestim::consensus_step(prev, 2, c, d);
  EXPECT_DOUBLE_EQ(next[0], 0.5);
  EXPECT_DOUBLE_EQ(next[1], 0.5);
  EXPECT_DOUBLE_EQ(next[2], 2.0);
}

TEST(Consensus, SumIsConserved) {
  auto c = ring5();
  c.initial_states = {0.3, -1.1, 2.0, 5.5, 0.0};
  const double s0 = std::accumulate(c.initial_states.begin(), c.initial_states.end(), 0.0);
  for (const auto& cp : scdestim::run_consensus(c, 20000, 5)) {
    EXPECT_NEAR(cp.state_sum, s0, 1e-9) << "k=" << cp.k;
    EXPECT_NEAR(cp.mean_state, s0 / 5.0, 1e-10);
  }
}

TEST(Consensus, EqualStatesKeepTheAverage) {
  auto c = ring5();
  c.initial_states.assign(5, 1.5);
  for (const auto& cp : scdestim::run_consensus(c, 5000, 9)) EXPECT_NEAR(cp.mean_state, 1.5, 1e-12);
}

TEST(Consensus, ZeroStepFreezesStates) {
  auto c = ring5();
  c.step = StepSchedule::custom([](std::uint64_t) { return 0.0; });
  const auto cps = scdestim::run_consensus(c, 1000, 1);
  for (const auto& cp : cps) EXPECT_DOUBLE_EQ(cp.max_deviation, 2.0);
}

TEST(Consensus, HorizonZero) {
  const auto cps = scdestim::run_consensus(ring5(), 0, 1);
  ASSERT_EQ(cps.size(), 1u);
  EXPECT_EQ(cps[0].k, 0u);
  EXPECT_DOUBLE_EQ(cps[0].max_deviation, 2.0);
}

TEST(Consensus, RejectsDisconnectedAndBadSchedules) {
  auto c = ring5();
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}};
  c.topology = Topology::build(5, e);
  EXPECT_THROW(scdestim::run_consensus(c, 10, 1), std::invalid_argument);
  auto d = ring5();
  d.step = StepSchedule::polynomial(1.0, 0.5);
  EXPECT_THROW(d.validate(), std::invalid_argument);
  d.initial_states.pop_back();
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(Consensus, Ring5RegressionAndDecrease) {
  const auto cps = scdestim::run_consensus(ring5(), 1000000, 1);
  const double final_d = cps.back().max_deviation;
  EXPECT_LT(final_d, 0.25);
  // Frozen from the seeded reference run.
  EXPECT_NEAR(final_d, kRing5FinalDeviation, 1e-9 * kRing5FinalDeviation);
}

TEST(Consensus, MedianDeviationDecreasesOverSeeds) {
  std::vector<double> early, late;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cps = scdestim::run_consensus(ring5(), 1000000, seed);
    const auto at = std::find_if(cps.begin(), cps.end(), [](const auto& cp) { return cp.k >= 1000; });
    early.push_back(at->max_deviation);
    late.push_back(cps.back().max_deviation);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[9] + v[10]);
  };
  EXPECT_LT(median(late), median(early));
}

}  // namespace
