#ifndef SCDESTIM_RNG_HPP
#define SCDESTIM_RNG_HPP

#include <cstdint>
#include <optional>
#include <random>

namespace scdestim {

enum class StreamPurpose : std::uint8_t { dither = 0, observation = 1 };

/// Identifies one independent random stream under a master seed.
struct StreamId {
  std::uint64_t run = 0;
  std::uint64_t sensor = 0;
  StreamPurpose purpose = StreamPurpose::dither;
};

/// SplitMix64 finalizer; used to derive per-stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the stream identified by `id` under `master_seed`.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, const StreamId& id);

/// Inverse CDF of Lap(location, scale) at u in (0, 1).
double laplace_quantile(double u, double location = 0.0, double scale = 1.0);

/**
 * One random stream, owned by exactly one logical task.
 *
 * The sequence is a pure function of (master seed, stream id): the base
 * generator is std::mt19937_64, whose output is fixed by the standard,
 * and all transforms to uniforms, Laplace and Gaussian draws are done
 * here rather than through the implementation-defined <random>
 * distributions.
 */
class Stream {
 public:
  Stream(std::uint64_t master_seed, const StreamId& id);

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Throws std::invalid_argument if scale <= 0.
  double laplace(double location = 0.0, double scale = 1.0);

  /// std == 0 returns mean exactly (and consumes no draws).
  double gaussian(double mean = 0.0, double std = 1.0);

  const StreamId& id() const { return id_; }

 private:
  StreamId id_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace scdestim

#endif  // SCDESTIM_RNG_HPP
