#pragma once

#include <cstdio>
#include <string>

namespace ppimine::io {

/// Fixed-format double for TSV/JSON text output; identical input bits always
/// produce identical text, which keeps pipeline outputs byte-reproducible.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace ppimine::io
