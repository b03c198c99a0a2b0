#pragma once

namespace sdw {
inline constexpr const char* kVersion = "0.1.0";
}
