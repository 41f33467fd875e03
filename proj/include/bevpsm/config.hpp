// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Config files are JSON with comments. Lookups go through the helpers below so
// that every schema violation names the offending key.

#ifndef BEVPSM_CONFIG_HPP
#define BEVPSM_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bevpsm {

using Json = nlohmann::json;

/// Parses JSON text; `//` and `/* */` comments are allowed.
Json parse_config(std::string_view text, const std::string& source = "<config>");
/// Reads a config file. A top-level "extends": "<file>" names a base config
/// (relative to this file) that the current one is merged onto, objects key by
/// key; arrays and scalars replace.
Json load_config(const std::filesystem::path& path);

/// Applies `a.b.c=value` overrides in order. The value is parsed as JSON when
/// possible ("3", "true", "[1,2]"), otherwise taken as a string. Every path
/// must already exist in `config`; numeric parts index arrays.
void apply_overrides(Json& config, const std::vector<std::string>& overrides);

/// Canonical serialization (sorted keys, no whitespace) and its FNV-1a hash.
std::string canonical_dump(const Json& config);
std::string config_hash(const Json& config);

/// Typed access with ConfigError on a missing key or a wrong type. `where` is
/// the dotted path of `object`, used in messages.
const Json& require(const Json& object, std::string_view key, std::string_view where);
double get_number(const Json& object, std::string_view key, std::string_view where);
double get_number(const Json& object, std::string_view key, std::string_view where,
                  double fallback);
long long get_integer(const Json& object, std::string_view key, std::string_view where);
long long get_integer(const Json& object, std::string_view key, std::string_view where,
                      long long fallback);
std::string get_string(const Json& object, std::string_view key, std::string_view where);
std::string get_string(const Json& object, std::string_view key, std::string_view where,
                       const std::string& fallback);
bool get_bool(const Json& object, std::string_view key, std::string_view where, bool fallback);
std::vector<double> get_numbers(const Json& object, std::string_view key, std::string_view where);

/// Number that may be written as "inf" / "-inf" (JSON has no infinity).
double number_or_inf(const Json& value, std::string_view where);

std::string join_path(std::string_view where, std::string_view key);

}  // namespace bevpsm

#endif  // BEVPSM_CONFIG_HPP
