#pragma once

namespace secondwild {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace secondwild
