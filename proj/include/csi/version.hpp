#pragma once

namespace csi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace csi
