// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Small text helpers shared by every on-disk format: round-trip float
// formatting, whole-file I/O and the two-column (index, value) CSV series.

#ifndef BEVPSM_TEXT_IO_HPP
#define BEVPSM_TEXT_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bevpsm {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Parses a full token as a double; accepts "inf", "-inf", "+inf".
/// Returns false when the token is not entirely a number.
bool parse_double(std::string_view token, double& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Writes a `header_index,header_value` CSV with one row per element.
void write_series_csv(const std::filesystem::path& path, const std::vector<double>& values,
                      std::string_view index_header = "step_index",
                      std::string_view value_header = "value");

/// Reads a two-column CSV written by write_series_csv (or any CSV whose
/// second column holds the values and whose first column is 0..n-1).
/// A header row is detected when its second field is not numeric.
std::vector<double> read_series_csv(const std::filesystem::path& path);

/// 64-bit FNV-1a, used for config fingerprints in run manifests.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace bevpsm

#endif  // BEVPSM_TEXT_IO_HPP
