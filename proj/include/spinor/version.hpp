#pragma once

namespace spinor {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinor
