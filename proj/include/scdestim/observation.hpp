#ifndef SCDESTIM_OBSERVATION_HPP
#define SCDESTIM_OBSERVATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scdestim/rng.hpp"

namespace scdestim {

enum class HScheduleKind {
  constant,  // one matrix for every k
  periodic,  // table[(k - 1) mod size]
  table,     // table[k - 1]; k past the end is an error
};

/// Measurement matrices H_{i,k} of one sensor, each m_i x n.
class HSchedule {
 public:
  HSchedule() = default;
  static HSchedule constant(Eigen::MatrixXd h);
  static HSchedule periodic(std::vector<Eigen::MatrixXd> table);
  static HSchedule explicit_table(std::vector<Eigen::MatrixXd> table);

  const Eigen::MatrixXd& at(std::uint64_t k) const;

  HScheduleKind kind() const { return kind_; }
  const std::vector<Eigen::MatrixXd>& support() const { return table_; }
  Eigen::Index rows() const { return table_.front().rows(); }
  Eigen::Index cols() const { return table_.front().cols(); }

 private:
  HScheduleKind kind_ = HScheduleKind::constant;
  std::vector<Eigen::MatrixXd> table_;
};

struct SensorObservation {
  HSchedule h;
  double noise_std = 0.0;
};

/**
 * Linear observation model y_{i,k} = H_{i,k} theta + w_{i,k}.
 *
 * Noise is independent Gaussian per sensor by default. When
 * `noise_factor` is set it replaces the per-sensor standard deviations:
 * the stacked noise vector (all sensors, sensor-major) is factor * z with
 * z standard normal, which allows cross-sensor correlation.
 */
struct ObservationModel {
  Eigen::VectorXd theta;
  std::vector<SensorObservation> sensors;
  std::optional<Eigen::MatrixXd> noise_factor;

  std::size_t n_sensors() const { return sensors.size(); }
  Eigen::Index dim() const { return theta.size(); }
  Eigen::Index stacked_rows() const;

  /// Max spectral norm over every H in every sensor's schedule support.
  double h_bar() const;

  /// Throws std::invalid_argument on shape mismatches or negative std.
  void validate() const;
};

/// Independent-noise observation for one sensor; ignores noise_factor.
Eigen::VectorXd observe(const ObservationModel& model, std::size_t sensor, std::uint64_t k,
                        Stream& stream);

/// Observations of every sensor at tick k, honouring noise_factor.
/// `streams[i]` is sensor i's observation stream.
std::vector<Eigen::VectorXd> observe_all(const ObservationModel& model, std::uint64_t k,
                                         std::span<Stream> streams);

struct ExcitationReport {
  std::size_t p = 1;
  double delta = 0.0;
  bool passed = false;
};

/// Smallest eigenvalue of (1/p) sum_{t in window} sum_i H^T H, minimised
/// over every window [k, k+p-1] inside [1, k_max].
ExcitationReport check_excitation(const ObservationModel& model, std::size_t p, std::uint64_t k_max);

/// Window long enough to cover one full period of every schedule.
std::uint64_t excitation_horizon(const ObservationModel& model, std::size_t p);

/// Eight sensors, theta = (1, -1), H = [1 0] for odd and [0 1] for even
/// sensors (1-based), Gaussian noise std 0.1.
ObservationModel paper_observation_model();

}  // namespace scdestim

#endif  // SCDESTIM_OBSERVATION_HPP
