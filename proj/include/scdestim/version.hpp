#ifndef SCDESTIM_VERSION_HPP
#define SCDESTIM_VERSION_HPP

namespace scdestim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scdestim

#endif  // SCDESTIM_VERSION_HPP
