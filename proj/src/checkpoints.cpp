#include "scdestim/checkpoints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace scdestim {

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, double ratio,
                                                 bool include_zero) {
  if (!(ratio > 1.0)) throw std::invalid_argument("checkpoint ratio must exceed 1");
  std::vector<std::uint64_t> ticks;
  if (include_zero || horizon == 0) ticks.push_back(0);
  double next = 1.0;
  while (true) {
    const auto k = static_cast<std::uint64_t>(std::llround(next));
    if (k >= horizon) break;
    if (ticks.empty() || k > ticks.back()) ticks.push_back(k);
    next *= ratio;
  }
  for (std::uint64_t decade = 10; decade < horizon; decade *= 10) {
    ticks.push_back(decade);
    if (decade > UINT64_MAX / 10) break;
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  if (horizon > 0) ticks.push_back(horizon);
  return ticks;
}

}  // namespace scdestim
