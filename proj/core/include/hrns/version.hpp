#pragma once

namespace hrns {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace hrns
