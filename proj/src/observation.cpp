#include "scdestim/observation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scdestim {

HSchedule HSchedule::constant(Eigen::MatrixXd h) {
  HSchedule s;
  s.kind_ = HScheduleKind::constant;
  s.table_.push_back(std::move(h));
  return s;
}

HSchedule HSchedule::periodic(std::vector<Eigen::MatrixXd> table) {
  if (table.empty()) throw std::invalid_argument("periodic H schedule is empty");
  HSchedule s;
  s.kind_ = HScheduleKind::periodic;
  s.table_ = std::move(table);
  return s;
}

HSchedule HSchedule::explicit_table(std::vector<Eigen::MatrixXd> table) {
  if (table.empty()) throw std::invalid_argument("explicit H schedule is empty");
  HSchedule s;
  s.kind_ = HScheduleKind::table;
  s.table_ = std::move(table);
  return s;
}

const Eigen::MatrixXd& HSchedule::at(std::uint64_t k) const {
  if (k < 1) throw std::invalid_argument("H schedule is indexed from k = 1");
  switch (kind_) {
    case HScheduleKind::constant:
      return table_.front();
    case HScheduleKind::periodic:
      return table_[(k - 1) % table_.size()];
    case HScheduleKind::table:
      if (k > table_.size()) {
        throw std::out_of_range("explicit H schedule has no entry for k = " + std::to_string(k));
      }
      return table_[k - 1];
  }
  return table_.front();
}

Eigen::Index ObservationModel::stacked_rows() const {
  Eigen::Index rows = 0;
  for (const auto& s : sensors) rows += s.h.rows();
  return rows;
}

double ObservationModel::h_bar() const {
  double bound = 0.0;
  for (const auto& s : sensors) {
    for (const auto& h : s.h.support()) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
      if (svd.singularValues().size() > 0) bound = std::max(bound, svd.singularValues()(0));
    }
  }
  return bound;
}

void ObservationModel::validate() const {
  if (theta.size() == 0) throw std::invalid_argument("observation model: theta is empty");
  if (sensors.empty()) throw std::invalid_argument("observation model: no sensors");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const auto& s = sensors[i];
    const std::string who = "sensor " + std::to_string(i + 1);
    if (s.h.support().empty()) throw std::invalid_argument(who + ": no H matrices");
    const Eigen::Index m = s.h.rows();
    for (const auto& h : s.h.support()) {
      if (h.cols() != theta.size() || h.rows() != m || m == 0) {
        throw std::invalid_argument(who + ": H must be m_i x " + std::to_string(theta.size()) +
                                    " with a fixed m_i >= 1");
      }
      if (!h.allFinite()) throw std::invalid_argument(who + ": H has non-finite entries");
    }
    if (!(s.noise_std >= 0.0)) throw std::invalid_argument(who + ": noise std must be >= 0");
  }
  if (noise_factor) {
    const Eigen::Index r = stacked_rows();
    if (noise_factor->rows() != r || noise_factor->cols() != r) {
      throw std::invalid_argument("observation model: noise factor must be square of size sum m_i = " +
                                  std::to_string(r));
    }
  }
}

Eigen::VectorXd observe(const ObservationModel& model, std::size_t sensor, std::uint64_t k,
                        Stream& stream) {
  const auto& s = model.sensors.at(sensor);
  const Eigen::MatrixXd& h = s.h.at(k);
  Eigen::VectorXd y = h * model.theta;
  for (Eigen::Index r = 0; r < y.size(); ++r) y(r) += stream.gaussian(0.0, s.noise_std);
  return y;
}

std::vector<Eigen::VectorXd> observe_all(const ObservationModel& model, std::uint64_t k,
                                         std::span<Stream> streams) {
  const std::size_t n = model.n_sensors();
  if (streams.size() != n) throw std::invalid_argument("observe_all: one stream per sensor");
  std::vector<Eigen::VectorXd> ys(n);
  if (!model.noise_factor) {
    for (std::size_t i = 0; i < n; ++i) ys[i] = observe(model, i, k, streams[i]);
    return ys;
  }
  Eigen::VectorXd z(model.stacked_rows());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index r = 0; r < model.sensors[i].h.rows(); ++r) z(row++) = streams[i].gaussian();
  }
  const Eigen::VectorXd w = *model.noise_factor * z;
  row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXd& h = model.sensors[i].h.at(k);
    ys[i] = h * model.theta + w.segment(row, h.rows());
    row += h.rows();
  }
  return ys;
}

namespace {

Eigen::MatrixXd gram_at(const ObservationModel& model, std::uint64_t t) {
  const Eigen::Index n = model.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : model.sensors) {
    const Eigen::MatrixXd& h = s.h.at(t);
    g.noalias() += h.transpose() * h;
  }
  return g;
}

}  // namespace

ExcitationReport check_excitation(const ObservationModel& model, std::size_t p, std::uint64_t k_max) {
  if (p < 1) throw std::invalid_argument("excitation window p must be >= 1");
  if (k_max < p) throw std::invalid_argument("excitation check needs k_max >= p");
  ExcitationReport report;
  report.p = p;

  double delta = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 1; k + p - 1 <= k_max; ++k) {
    Eigen::MatrixXd window = Eigen::MatrixXd::Zero(model.dim(), model.dim());
    for (std::uint64_t t = k; t < k + p; ++t) window += gram_at(model, t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(window / static_cast<double>(p),
                                                          Eigen::EigenvaluesOnly);
    delta = std::min(delta, solver.eigenvalues()(0));
  }
  if (std::abs(delta) < 1e-12) delta = 0.0;  // eigensolver round-off
  report.delta = delta;
  report.passed = delta > 0.0;
  return report;
}

std::uint64_t excitation_horizon(const ObservationModel& model, std::size_t p) {
  std::uint64_t period = 1;
  std::uint64_t table_len = 0;
  for (const auto& s : model.sensors) {
    switch (s.h.kind()) {
      case HScheduleKind::constant:
        break;
      case HScheduleKind::periodic:
        period = std::lcm(period, static_cast<std::uint64_t>(s.h.support().size()));
        break;
      case HScheduleKind::table:
        table_len = table_len == 0 ? s.h.support().size()
                                   : std::min<std::uint64_t>(table_len, s.h.support().size());
        break;
    }
  }
  if (table_len > 0) return std::max<std::uint64_t>(table_len, p);
  return p + period - 1;
}

ObservationModel paper_observation_model() {
  ObservationModel m;
  m.theta = Eigen::Vector2d(1.0, -1.0);
  for (std::size_t i = 1; i <= 8; ++i) {
    Eigen::MatrixXd h(1, 2);
    if (i % 2 == 1) {
      h << 1.0, 0.0;
    } else {
      h << 0.0, 1.0;
    }
    m.sensors.push_back({HSchedule::constant(std::move(h)), 0.1});
  }
  return m;
}

}  // namespace scdestim
