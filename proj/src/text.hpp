#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace torusconj::text {

inline std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Lines with '#' comments removed and surrounding blanks trimmed; empty lines dropped.
inline std::vector<std::string> content_lines(std::string_view s) {
  std::vector<std::string> out;
  for (const std::string& raw : split(s, '\n')) {
    std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline bool starts_with_key(const std::string& line, std::string_view key, std::string* rest) {
  if (line.rfind(key, 0) != 0) return false;
  *rest = trim(std::string_view(line).substr(key.size()));
  return true;
}

}  // namespace torusconj::text
