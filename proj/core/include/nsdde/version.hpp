#pragma once

namespace nsdde {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchemeId = "neutral-euler-explicit-v1";
inline constexpr const char* kQuadratureId = "fine-grid-trapezoid-left-limit-v1";

}  // namespace nsdde
