#pragma once

namespace holorigid {

inline constexpr const char* kToolName = "holorigid";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace holorigid
