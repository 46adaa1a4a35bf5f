#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "happrs/core/error.hpp"

namespace happrs::io::detail {

[[noreturn]] inline void config_error(const std::string& msg) {
  throw Error(ErrorKind::Config, msg);
}

inline void expect_object(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) config_error(where + ": expected a JSON object");
}

inline void reject_unknown(const nlohmann::json& j, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) config_error(where + ": unknown key \"" + it.key() + "\"");
  }
}

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& where,
                                   const char* key) {
  auto it = j.find(key);
  if (it == j.end()) config_error(where + ": missing key \"" + key + "\"");
  return *it;
}

inline double as_double(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number()) config_error(what + ": expected a number");
  return v.get<double>();
}

inline std::uint64_t as_u64(const nlohmann::json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  config_error(what + ": expected a non-negative integer");
}

inline bool as_bool(const nlohmann::json& v, const std::string& what) {
  if (!v.is_boolean()) config_error(what + ": expected true or false");
  return v.get<bool>();
}

inline std::string as_string(const nlohmann::json& v, const std::string& what) {
  if (!v.is_string()) config_error(what + ": expected a string");
  return v.get<std::string>();
}

inline void check_schema(const nlohmann::json& j, const std::string& where, int version) {
  const auto& s = field(j, where, "schema");
  if (!s.is_number_integer() || s.get<long long>() != version)
    config_error(where + ": unsupported schema (expected " + std::to_string(version) + ")");
}

}  // namespace happrs::io::detail
