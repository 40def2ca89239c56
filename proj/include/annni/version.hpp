#pragma once

namespace annni {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace annni
