// Copyright 2026 The Binamix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON field access with Error(kFormat) diagnostics, shared by the scene
// and grid readers.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "binamix/errors.hpp"

namespace binamix::cli::detail {

using Json = nlohmann::json;

inline Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kFormat, what + ": " + e.what());
  }
}

[[noreturn]] inline void bad_field(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::kFormat, where + ": " + why);
}

inline const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double get_number(const Json& v, const std::string& where) {
  if (!v.is_number()) bad_field(where, "expected a number");
  return v.get<double>();
}

inline std::int64_t get_integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) bad_field(where, "expected an integer");
  return v.get<std::int64_t>();
}

inline std::string get_string(const Json& v, const std::string& where) {
  if (!v.is_string()) bad_field(where, "expected a string");
  return v.get<std::string>();
}

inline bool get_bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) bad_field(where, "expected true or false");
  return v.get<bool>();
}

inline void check_schema(const Json& doc, int expected, const std::string& what) {
  if (!doc.is_object()) bad_field(what, "expected a JSON object");
  const Json* s = find(doc, "schema");
  if (!s) bad_field(what, "missing \"schema\"");
  if (get_integer(*s, what + ".schema") != expected) {
    bad_field(what, "unsupported schema " + s->dump() + " (expected " +
                        std::to_string(expected) + ")");
  }
}

/// Runs f on a parsed value and rewraps any library error with the field
/// name, so "unknown mode" becomes "scene.mode: unknown mode ...".
template <typename F>
auto with_field(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnsupportedLayout) throw;
    throw Error(ErrorCode::kFormat, where + ": " + e.what());
  }
}

}  // namespace binamix::cli::detail
