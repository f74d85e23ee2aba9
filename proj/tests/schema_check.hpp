// Minimal JSON Schema checker covering the subset used by the shipped
// schemas: type, enum, required, properties, additionalProperties (boolean),
// items (single schema), minItems, maxItems, minimum, maximum. Returns an
// empty string when the document conforms, otherwise a short description of
// the first violation.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace pghz::testing {

inline bool matches_type(const std::string& type, const nlohmann::json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

inline std::string schema_violation(const nlohmann::json& schema,
                                    const nlohmann::json& value,
                                    const std::string& path = "$") {
  if (schema.contains("type")) {
    const nlohmann::json& type = schema.at("type");
    bool ok = false;
    if (type.is_string()) {
      ok = matches_type(type.get<std::string>(), value);
    } else {
      for (const auto& t : type) {
        if (matches_type(t.get<std::string>(), value)) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) return path + ": type mismatch";
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& candidate : schema.at("enum")) {
      if (candidate == value) {
        ok = true;
        break;
      }
    }
    if (!ok) return path + ": not in enum";
  }

  if (value.is_number() && schema.contains("minimum") &&
      value.get<double>() < schema.at("minimum").get<double>()) {
    return path + ": below minimum";
  }
  if (value.is_number() && schema.contains("maximum") &&
      value.get<double>() > schema.at("maximum").get<double>()) {
    return path + ": above maximum";
  }

  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!value.contains(key.get<std::string>())) {
          return path + ": missing required '" + key.get<std::string>() + "'";
        }
      }
    }
    const nlohmann::json properties =
        schema.contains("properties") ? schema.at("properties")
                                      : nlohmann::json::object();
    const bool allow_additional =
        !schema.contains("additionalProperties") ||
        schema.at("additionalProperties").get<bool>();
    for (const auto& item : value.items()) {
      if (properties.contains(item.key())) {
        const std::string err = schema_violation(
            properties.at(item.key()), item.value(), path + "." + item.key());
        if (!err.empty()) return err;
      } else if (!allow_additional) {
        return path + ": unexpected property '" + item.key() + "'";
      }
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems")) {
      return path + ": too few items";
    }
    if (schema.contains("maxItems") && value.size() > schema.at("maxItems")) {
      return path + ": too many items";
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string err =
            schema_violation(schema.at("items"), value[i],
                             path + "[" + std::to_string(i) + "]");
        if (!err.empty()) return err;
      }
    }
  }

  return "";
}

inline nlohmann::json load_schema(const std::string& name) {
  const std::string path = std::string(PGHZ_SCHEMA_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return nlohmann::json::parse(buffer.str());
}

}  // namespace pghz::testing
