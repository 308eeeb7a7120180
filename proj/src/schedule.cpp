#include "scdestim/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace scdestim {

StepSchedule StepSchedule::polynomial(double initial, double exponent) {
  if (!(initial > 0.0)) {
    throw std::invalid_argument("step schedule initial value must be positive");
  }
  if (!std::isfinite(exponent) || exponent < 0.0) {
    throw std::invalid_argument("step schedule exponent must be finite and nonnegative");
  }
  StepSchedule s;
  s.initial_ = initial;
  s.exponent_ = exponent;
  return s;
}

StepSchedule StepSchedule::custom(std::function<double(std::uint64_t)> fn) {
  if (!fn) throw std::invalid_argument("custom step schedule needs a callable");
  StepSchedule s;
  s.custom_ = std::make_shared<const std::function<double(std::uint64_t)>>(std::move(fn));
  return s;
}

double StepSchedule::at(std::uint64_t k) const {
  if (custom_) return (*custom_)(k);
  if (exponent_ == 1.0) return initial_ / static_cast<double>(k);
  return initial_ / std::pow(static_cast<double>(k), exponent_);
}

}  // namespace scdestim
