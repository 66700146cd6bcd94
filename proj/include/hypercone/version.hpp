#pragma once

namespace hypercone {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hypercone
