#pragma once

namespace relwave {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace relwave
