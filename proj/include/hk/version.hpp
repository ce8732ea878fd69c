#pragma once

namespace hk {

inline constexpr const char* kToolVersion = "0.1.0";

// Uniform doubles are produced by taking the top 53 bits of an mt19937_64
// draw; this keeps generated initial conditions identical across platforms.
inline constexpr const char* kPrngName = "mt19937_64+ldexp53";

}  // namespace hk
