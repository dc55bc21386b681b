#pragma once

#include <cstdio>
#include <string>

namespace hybell {

// Full round-trip precision for serialized doubles.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Compact scientific form for human-facing diagnostics.
inline std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline std::string format_fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace hybell
