#ifndef SCDESTIM_CHECKPOINTS_HPP
#define SCDESTIM_CHECKPOINTS_HPP

#include <cstdint>
#include <vector>

namespace scdestim {

inline constexpr double kDefaultCheckpointRatio = 1.2;

/// Strictly increasing ticks 1, 2, ... spaced geometrically by `ratio`
/// (rounded, deduplicated), plus every power of ten, always ending at
/// `horizon`. Horizon 0
/// yields {0}. With `include_zero`, 0 is prepended.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon,
                                                 double ratio = kDefaultCheckpointRatio,
                                                 bool include_zero = false);

}  // namespace scdestim

#endif  // SCDESTIM_CHECKPOINTS_HPP
