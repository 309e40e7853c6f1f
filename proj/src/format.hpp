#pragma once

#include <charconv>
#include <string>

namespace kramers::detail {

// 12 significant digits, '.' separator, independent of the C locale.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace kramers::detail
