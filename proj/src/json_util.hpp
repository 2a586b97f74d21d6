#pragma once

#include <cstdio>
#include <cstdlib>

#include <json.hpp>

namespace lpr::detail {

using Json = nlohmann::ordered_json;

// Rounds to 12 significant digits so serialized output is stable across
// platforms; the shortest round-trip form of the result has at most 12 digits.
inline double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace lpr::detail
