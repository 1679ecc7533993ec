#pragma once

namespace denseval {

inline constexpr const char* kToolName = "denseval";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace denseval
