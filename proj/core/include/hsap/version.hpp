#pragma once

namespace hsap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hsap
