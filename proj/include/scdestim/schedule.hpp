#ifndef SCDESTIM_SCHEDULE_HPP
#define SCDESTIM_SCHEDULE_HPP

#include <cstdint>
#include <functional>
#include <memory>

namespace scdestim {

/**
 * Positive step-size sequence k -> value(k), k >= 1.
 *
 * Polynomial schedules initial / k^exponent are the common case and the
 * only ones the theory checks can reason about; arbitrary schedules are
 * carried as opaque callables.
 */
class StepSchedule {
 public:
  StepSchedule() = default;

  static StepSchedule polynomial(double initial, double exponent);
  static StepSchedule custom(std::function<double(std::uint64_t)> fn);

  double at(std::uint64_t k) const;

  bool is_polynomial() const { return !custom_; }
  double initial() const { return initial_; }
  double exponent() const { return exponent_; }

 private:
  double initial_ = 1.0;
  double exponent_ = 1.0;
  std::shared_ptr<const std::function<double(std::uint64_t)>> custom_;
};

}  // namespace scdestim

#endif  // SCDESTIM_SCHEDULE_HPP
