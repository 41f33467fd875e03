// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "bevpsm/errors.hpp"
#include "bevpsm/text_io.hpp"

namespace bevpsm {

Json parse_config(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

namespace {

Json load_config_depth(const std::filesystem::path& path, int depth) {
  if (depth > 8) throw ConfigError(path.string() + ": 'extends' chain is too deep");
  Json config = parse_config(read_file(path), path.string());
  if (!config.is_object() || !config.contains("extends")) return config;
  const Json& base_name = config.at("extends");
  if (!base_name.is_string()) throw ConfigError(path.string() + ": 'extends' must be a file name");
  Json base = load_config_depth(path.parent_path() / base_name.get<std::string>(), depth + 1);
  config.erase("extends");
  base.merge_patch(config);
  return base;
}

}  // namespace

Json load_config(const std::filesystem::path& path) { return load_config_depth(path, 0); }

void apply_overrides(Json& config, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + item + "' is not of the form key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    Json* node = &config;
    for (auto part : split(key, '.')) {
      const std::string name(part);
      if (node->is_array()) {
        std::size_t index = 0;
        const auto [end, ec] = std::from_chars(name.data(), name.data() + name.size(), index);
        if (ec != std::errc() || end != name.data() + name.size() || index >= node->size()) {
          throw ConfigError("override '" + key + "' does not name a known key");
        }
        node = &(*node)[index];
        continue;
      }
      if (!node->is_object() || !node->contains(name)) {
        throw ConfigError("override '" + key + "' does not name a known key");
      }
      node = &(*node)[name];
    }
    Json value;
    try {
      value = Json::parse(text);
    } catch (const Json::parse_error&) {
      value = text;
    }
    *node = std::move(value);
  }
}

std::string canonical_dump(const Json& config) { return config.dump(); }

std::string config_hash(const Json& config) { return hex64(fnv1a64(canonical_dump(config))); }

std::string join_path(std::string_view where, std::string_view key) {
  if (where.empty()) return std::string(key);
  return std::string(where) + "." + std::string(key);
}

const Json& require(const Json& object, std::string_view key, std::string_view where) {
  if (!object.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  const auto it = object.find(std::string(key));
  if (it == object.end()) throw ConfigError("missing key '" + join_path(where, key) + "'");
  return *it;
}

double number_or_inf(const Json& value, std::string_view where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError("'" + std::string(where) + "' must be a number");
}

double get_number(const Json& object, std::string_view key, std::string_view where) {
  return number_or_inf(require(object, key, where), join_path(where, key));
}

double get_number(const Json& object, std::string_view key, std::string_view where,
                  double fallback) {
  if (!object.contains(std::string(key))) return fallback;
  return get_number(object, key, where);
}

long long get_integer(const Json& object, std::string_view key, std::string_view where) {
  const Json& v = require(object, key, where);
  if (!v.is_number_integer()) {
    throw ConfigError("'" + join_path(where, key) + "' must be an integer");
  }
  return v.get<long long>();
}

long long get_integer(const Json& object, std::string_view key, std::string_view where,
                      long long fallback) {
  if (!object.contains(std::string(key))) return fallback;
  return get_integer(object, key, where);
}

std::string get_string(const Json& object, std::string_view key, std::string_view where) {
  const Json& v = require(object, key, where);
  if (!v.is_string()) throw ConfigError("'" + join_path(where, key) + "' must be a string");
  return v.get<std::string>();
}

std::string get_string(const Json& object, std::string_view key, std::string_view where,
                       const std::string& fallback) {
  if (!object.contains(std::string(key))) return fallback;
  return get_string(object, key, where);
}

bool get_bool(const Json& object, std::string_view key, std::string_view where, bool fallback) {
  if (!object.contains(std::string(key))) return fallback;
  const Json& v = object.at(std::string(key));
  if (!v.is_boolean()) throw ConfigError("'" + join_path(where, key) + "' must be true or false");
  return v.get<bool>();
}

std::vector<double> get_numbers(const Json& object, std::string_view key, std::string_view where) {
  const Json& v = require(object, key, where);
  const std::string path = join_path(where, key);
  if (!v.is_array()) throw ConfigError("'" + path + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& item : v) out.push_back(number_or_inf(item, path));
  return out;
}

}  // namespace bevpsm
