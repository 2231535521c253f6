#pragma once

namespace secharq {
inline constexpr const char* version = "0.1.0";
}
