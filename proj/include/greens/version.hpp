#pragma once

namespace greens {

#ifdef GREENS_VERSION
inline constexpr const char* kVersion = GREENS_VERSION;
#else
inline constexpr const char* kVersion = "0.1.0";
#endif

}  // namespace greens
