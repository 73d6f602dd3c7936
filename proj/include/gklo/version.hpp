#pragma once

namespace gklo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gklo
