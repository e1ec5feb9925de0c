#pragma once

namespace hexakin {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace hexakin
