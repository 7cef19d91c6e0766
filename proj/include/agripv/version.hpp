#pragma once

namespace agripv {

inline constexpr const char* kVersion = "0.1.0";

} // namespace agripv
