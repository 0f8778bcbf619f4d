#pragma once

#include <array>
#include <charconv>
#include <string>
#include <system_error>

namespace odeverify {

/// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (res.ec != std::errc{}) return "nan";
  return {buf.data(), res.ptr};
}

}  // namespace odeverify
