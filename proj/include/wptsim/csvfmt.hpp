#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace wptsim {

/// Shortest representation that round-trips the exact double value.
/// Used for all CSV payloads so repeated runs are byte-identical.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// %.*g formatting for human-readable reports (not the CSV contract).
inline std::string format_sig(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::string(buf);
}

}  // namespace wptsim
