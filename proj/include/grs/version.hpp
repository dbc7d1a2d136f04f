#pragma once

namespace grs {

inline constexpr const char* kToolName = "grs-autohp";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace grs
