#pragma once

namespace gmce {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gmce
