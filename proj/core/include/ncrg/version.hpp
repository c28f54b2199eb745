#pragma once

namespace ncrg {
inline constexpr const char* kVersion = "0.1.0";
}
