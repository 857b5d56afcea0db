#pragma once

#include <cstdio>
#include <string>

namespace sqn {

/// Round-trippable decimal with 17 significant digits, locale independent
/// for the "C" locale the tools run under.
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace sqn
