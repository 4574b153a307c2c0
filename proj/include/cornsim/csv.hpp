#pragma once

#include <charconv>
#include <concepts>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cornsim/error.hpp"

namespace cornsim::csv {

/// One data row of a simple comma-separated file (no quoting).
struct Row {
  std::size_t line = 0;
  std::vector<std::string_view> fields;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Rows hold views into the text, so a temporary string is refused.
template <class S>
  requires std::same_as<S, std::string>
std::vector<Row> read(S&& text, std::string_view expected_header) = delete;

/// Splits `text` into rows, checking the header against `expected_header` and
/// the column count of every row. Blank lines are skipped.
inline std::vector<Row> read(std::string_view text, std::string_view expected_header) {
  std::vector<Row> rows;
  const auto want = split(expected_header);
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto fields = split(line);
    if (!header_seen) {
      if (fields != want) {
        throw ParseError("expected header '" + std::string(expected_header) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != want.size()) {
      throw ParseError("expected " + std::to_string(want.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!header_seen) throw ParseError("empty file");
  return rows;
}

inline double to_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("bad number '" + std::string(s) + "'", line);
  }
  return v;
}

inline long long to_int(std::string_view s, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + std::string(s) + "'", line);
  }
  return v;
}

/// Shortest round-trippable decimal form of `v`.
inline std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Fixed-point form with `digits` decimals.
inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace cornsim::csv
