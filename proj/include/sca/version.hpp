#pragma once

namespace sca {

inline constexpr const char* kToolName = "sca";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace sca
