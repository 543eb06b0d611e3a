#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fieldent/errors.hpp"

namespace fieldent {

// 17 significant digits: lossless double round-trip, byte-stable output.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

using Cell = std::variant<long long, double, std::string>;

inline std::string format_cell(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  return std::get<std::string>(c);
}

// Plain numeric CSV: comma separated, '\n' line ends, no quoting needed for
// numeric tables; '.' decimal point (C locale).
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<Cell>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_cell(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::ios_base::failure("write failed: " + path);
}

// Minimal structural validator: `schema` maps key -> expected type name
// ("number", "integer", "string", "array", "object", "boolean"), recursing
// into nested objects. Arrays may carry {"items": <type>}.
inline bool matches_schema(const nlohmann::json& value, const nlohmann::json& schema,
                           std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (schema.is_string()) {
    const std::string t = schema.get<std::string>();
    if (t == "number") return value.is_number() || fail("expected number");
    if (t == "integer") return value.is_number_integer() || fail("expected integer");
    if (t == "string") return value.is_string() || fail("expected string");
    if (t == "boolean") return value.is_boolean() || fail("expected boolean");
    if (t == "array") return value.is_array() || fail("expected array");
    if (t == "object") return value.is_object() || fail("expected object");
    return fail("unknown schema type " + t);
  }
  if (schema.is_object()) {
    if (schema.contains("items")) {
      if (!value.is_array()) return fail("expected array");
      for (const auto& el : value)
        if (!matches_schema(el, schema.at("items"), why)) return false;
      return true;
    }
    if (!value.is_object()) return fail("expected object");
    for (auto it = schema.begin(); it != schema.end(); ++it) {
      if (!value.contains(it.key())) return fail("missing key " + it.key());
      if (!matches_schema(value.at(it.key()), it.value(), why)) {
        if (why) *why = it.key() + ": " + *why;
        return false;
      }
    }
    return true;
  }
  return fail("bad schema node");
}

}  // namespace fieldent
