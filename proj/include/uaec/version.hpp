#ifndef UAEC_VERSION_HPP
#define UAEC_VERSION_HPP

namespace uaec {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace uaec

#endif  // UAEC_VERSION_HPP
