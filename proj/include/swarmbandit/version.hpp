#pragma once

namespace swb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace swb
