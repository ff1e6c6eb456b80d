#pragma once

namespace idla {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace idla
