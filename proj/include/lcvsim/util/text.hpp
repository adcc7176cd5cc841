#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lcvsim/util/errors.hpp"

namespace lcvsim {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Drops a '#' comment and surrounding whitespace. The returned view points
/// into the caller's buffer, never into a temporary.
inline std::string_view strip_comment(std::string_view line) {
  return trim(line.substr(0, std::min(line.find('#'), line.size())));
}

/// Splits on any of the given delimiters, dropping empty tokens.
inline std::vector<std::string> split_tokens(std::string_view s,
                                             std::string_view delims = " \t,;") {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto next = s.find_first_of(delims, pos);
    const auto end = (next == std::string_view::npos) ? s.size() : next;
    if (end > pos) out.emplace_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

inline double parse_double(std::string_view token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("not a number: '" + std::string(token) + "'", 0);
  }
  return value;
}

inline std::uint64_t parse_u64(std::string_view token) {
  std::uint64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("not an unsigned integer: '" + std::string(token) + "'", 0);
  }
  return value;
}

/// Shortest round-trip decimal form; locale-independent, '.' separator.
inline std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

/// Fixed significant digits, for axis labels and similar display text.
inline std::string format_double_digits(double value, int digits) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                       std::chars_format::general, digits);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace lcvsim
