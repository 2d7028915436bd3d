#ifndef NHPH_VERSION_HPP
#define NHPH_VERSION_HPP

namespace nhph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nhph

#endif  // NHPH_VERSION_HPP
