#pragma once

namespace binmf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace binmf
