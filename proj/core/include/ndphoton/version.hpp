#pragma once

namespace ndphoton {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ndphoton
