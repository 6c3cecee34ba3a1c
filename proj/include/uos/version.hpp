#ifndef UOS_VERSION_HPP
#define UOS_VERSION_HPP

namespace uos {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace uos

#endif  // UOS_VERSION_HPP
