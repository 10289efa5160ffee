#pragma once

namespace qhfilt {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "qhfilt";

}  // namespace qhfilt
