#pragma once

namespace lt {

#ifndef LOCALTRIPLE_VERSION
#define LOCALTRIPLE_VERSION "unknown"
#endif

inline constexpr const char* version() { return LOCALTRIPLE_VERSION; }

}  // namespace lt
