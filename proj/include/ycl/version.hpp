#pragma once

namespace ycl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ycl
