#pragma once

namespace profilecast {

inline constexpr const char* kVersion = "0.1.0";

} // namespace profilecast
