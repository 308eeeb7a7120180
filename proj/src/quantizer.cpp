#include "scdestim/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace scdestim {

void ChannelParams::validate() const {
  if (!(nu >= 0.0 && nu <= 0.5)) {
    throw std::invalid_argument("channel nu must lie in [0, 1/2]");
  }
  if (!(b > 0.0)) {
    throw std::invalid_argument("channel b must be positive");
  }
}

double laplace_cdf(double x) {
  return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
}

double threshold(double nu, double b, std::uint64_t k) {
  if (nu == 0.0 || k <= 1) return 0.0;
  return nu * b * std::log(static_cast<double>(k));
}

ChannelEvent channel_step(double x, const ChannelParams& params, std::uint64_t k, double dither) {
  const double z = x + params.b * dither;
  ChannelEvent ev;
  ev.s = z > 0.0 ? 1 : -1;
  ev.triggered = std::abs(z) > threshold(params.nu, params.b, k);
  ev.s_hat = ev.triggered ? ev.s : 0;
  ev.bits = ev.triggered ? 1 : 0;
  return ev;
}

double fusion_g(double x, double nu, double b, std::uint64_t k) {
  const double c = threshold(nu, b, k);
  return laplace_cdf((x - c) / b) - laplace_cdf((-x - c) / b);
}

double trigger_probability(double x, double nu, double b, std::uint64_t k) {
  const double c = threshold(nu, b, k);
  return laplace_cdf((x - c) / b) + laplace_cdf((-x - c) / b);
}

}  // namespace scdestim
