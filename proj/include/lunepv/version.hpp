#pragma once

namespace lunepv {
inline constexpr const char* kVersion = "0.1.0";
}
