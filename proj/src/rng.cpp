#include "scdestim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scdestim {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, const StreamId& id) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ id.run);
  h = mix64(h ^ id.sensor);
  h = mix64(h ^ static_cast<std::uint64_t>(id.purpose));
  return h;
}

double laplace_quantile(double u, double location, double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("Laplace scale must be positive");
  }
  const double c = u - 0.5;
  if (c == 0.0) return location;
  const double sign = c > 0.0 ? 1.0 : -1.0;
  return location - scale * sign * std::log1p(-2.0 * std::abs(c));
}

Stream::Stream(std::uint64_t master_seed, const StreamId& id)
    : id_(id), engine_(derive_stream_seed(master_seed, id)) {}

double Stream::uniform() {
  // (m + 0.5) / 2^53 lies strictly inside (0, 1).
  const std::uint64_t m = engine_() >> 11;
  return (static_cast<double>(m) + 0.5) * 0x1.0p-53;
}

double Stream::laplace(double location, double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("Laplace scale must be positive");
  }
  return laplace_quantile(uniform(), location, scale);
}

double Stream::gaussian(double mean, double std) {
  if (std == 0.0) return mean;
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return mean + std * z;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  return mean + std * r * std::cos(angle);
}

}  // namespace scdestim
