// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bevpsm/errors.hpp"

namespace bevpsm {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return std::signbit(value) ? "-0" : "0";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw InternalError("format_double: to_chars failed");
  return std::string(buffer, end);
}

bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  if (token == "inf" || token == "Inf" || token == "infinity") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (token == "-inf" || token == "-Inf" || token == "-infinity") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<double>& values,
                      std::string_view index_header, std::string_view value_header) {
  std::string out;
  out.reserve(values.size() * 8 + 32);
  out.append(index_header).append(",").append(value_header).append("\n");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.append(std::to_string(i)).append(",").append(format_double(values[i])).append("\n");
  }
  write_file(path, out);
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<double> values;
  std::string_view rest(text);
  long line_no = 0;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() < 2) {
      throw ParseError(path.string(), line_no, "expected two comma-separated columns");
    }
    double index = 0.0;
    double value = 0.0;
    const bool index_ok = parse_double(fields[0], index);
    const bool value_ok = parse_double(fields[1], value);
    if (!value_ok) {
      if (values.empty() && !index_ok) continue;  // header
      throw ParseError(path.string(), line_no, "non-numeric value '" + std::string(fields[1]) + "'");
    }
    if (!index_ok || index != static_cast<double>(values.size())) {
      throw ParseError(path.string(), line_no,
                       "expected index " + std::to_string(values.size()));
    }
    values.push_back(value);
  }
  return values;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

const char* category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kInput: return "input";
    case ErrorCategory::kGeneration: return "generation";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace bevpsm
