#pragma once

namespace sparsetrace {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sparsetrace
