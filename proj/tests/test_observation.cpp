#include "scdestim/observation.hpp"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

namespace {

using scdestim::HSchedule;
using scdestim::ObservationModel;
using scdestim::Stream;
using scdestim::StreamPurpose;

Eigen::MatrixXd row(double a, double b) {
  Eigen::MatrixXd m(1, 2);
  m << a, b;
  return m;
}

TEST(Observation, NoiselessPaperModel) {
  auto model = scdestim::paper_observation_model();
  for (auto& s : model.sensors) s.noise_std = 0.0;
  Stream st(1, {});
  for (std::size_t i = 0; i < 8; ++i) {
    const auto y = scdestim::observe(model, i, 3, st);
    ASSERT_EQ(y.size(), 1);
    // Sensor i is 0-based here, so even index means odd 1-based sensor.
    EXPECT_EQ(y(0), i % 2 == 0 ? 1.0 : -1.0);
  }
}

TEST(Observation, EmpiricalMean) {
  const auto model = scdestim::paper_observation_model();
  Stream st(4, {0, 2, StreamPurpose::observation});
  constexpr int kDraws = 100000;
  double sum = 0.0;
  for (int t = 0; t < kDraws; ++t) sum += scdestim::observe(model, 2, t + 1, st)(0);
  EXPECT_NEAR(sum / kDraws, 1.0, 4.0 * 0.1 / std::sqrt(static_cast<double>(kDraws)));
}

TEST(Observation, ExcitationExamples) {
  const auto model = scdestim::paper_observation_model();
  const auto rep = scdestim::check_excitation(model, 1, 10);
  EXPECT_NEAR(rep.delta, 4.0, 1e-12);
  EXPECT_TRUE(rep.passed);
  EXPECT_NEAR(model.h_bar(), 1.0, 1e-12);

  ObservationModel zero;
  zero.theta = Eigen::Vector2d(1, 2);
  zero.sensors.push_back({HSchedule::constant(Eigen::MatrixXd::Zero(1, 2)), 0.0});
  const auto z = scdestim::check_excitation(zero, 1, 5);
  EXPECT_EQ(z.delta, 0.0);
  EXPECT_FALSE(z.passed);

  ObservationModel alt;
  alt.theta = Eigen::Vector2d(1, 2);
  alt.sensors.push_back({HSchedule::periodic({row(1, 0), row(0, 1)}), 0.0});
  EXPECT_NEAR(scdestim::check_excitation(alt, 2, 20).delta, 0.5, 1e-12);
  EXPECT_FALSE(scdestim::check_excitation(alt, 1, 20).passed);
  EXPECT_THROW(scdestim::check_excitation(alt, 3, 2), std::invalid_argument);
}

TEST(Observation, ExcitationIgnoresSensorOrderAndHorizon) {
  auto model = scdestim::paper_observation_model();
  model.sensors[0].h = HSchedule::periodic({row(1, 0), row(0.5, 0.5), row(0, 2)});
  model.sensors[3].h = HSchedule::periodic({row(0.2, 1), row(1, -1)});
  const double d = scdestim::check_excitation(model, 2, 12).delta;
  EXPECT_NEAR(scdestim::check_excitation(model, 2, 60).delta, d, 1e-12);
  auto shuffled = model;
  std::swap(shuffled.sensors[0], shuffled.sensors[5]);
  std::swap(shuffled.sensors[3], shuffled.sensors[7]);
  EXPECT_NEAR(scdestim::check_excitation(shuffled, 2, 12).delta, d, 1e-12);
}

TEST(Observation, ExplicitTableEnds) {
  const auto h = HSchedule::explicit_table({row(1, 0), row(0, 1)});
  EXPECT_EQ(h.at(2)(0, 1), 1.0);
  EXPECT_THROW(h.at(3), std::out_of_range);
}

TEST(Observation, ValidationCatchesShapes) {
  auto model = scdestim::paper_observation_model();
  model.sensors[1].h = HSchedule::constant(Eigen::MatrixXd::Ones(1, 3));
  EXPECT_THROW(model.validate(), std::invalid_argument);
  auto neg = scdestim::paper_observation_model();
  neg.sensors[0].noise_std = -1.0;
  EXPECT_THROW(neg.validate(), std::invalid_argument);
}

TEST(Observation, CorrelatedNoiseCovariance) {
  ObservationModel model;
  model.theta = Eigen::Vector2d(0, 0);
  model.sensors.push_back({HSchedule::constant(row(1, 0)), 0.0});
  model.sensors.push_back({HSchedule::constant(row(0, 1)), 0.0});
  Eigen::MatrixXd factor(2, 2);
  factor << 1.0, 0.0, 0.6, 0.8;  // covariance [[1, .6], [.6, 1]]
  model.noise_factor = factor;
  model.validate();
  std::vector<Stream> streams = {Stream(7, {0, 0, StreamPurpose::observation}),
                                 Stream(7, {0, 1, StreamPurpose::observation})};
  constexpr int kDraws = 200000;
  double s01 = 0.0, s00 = 0.0, s11 = 0.0;
  for (int t = 1; t <= kDraws; ++t) {
    const auto ys = scdestim::observe_all(model, t, streams);
    s00 += ys[0](0) * ys[0](0);
    s11 += ys[1](0) * ys[1](0);
    s01 += ys[0](0) * ys[1](0);
  }
  EXPECT_NEAR(s00 / kDraws, 1.0, 0.02);
  EXPECT_NEAR(s11 / kDraws, 1.0, 0.02);
  EXPECT_NEAR(s01 / kDraws, 0.6, 0.02);
}

}  // namespace
