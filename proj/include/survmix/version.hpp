#pragma once

namespace survmix {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace survmix
