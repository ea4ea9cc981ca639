#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "stochround/common.hpp"

namespace stochround {

using json = nlohmann::ordered_json;

// Numeric fields may be JSON numbers or decimal strings; strings let a file
// pin values like "0.01" exactly as written.
inline double json_number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError("field '" + field + "': cannot parse '" + s + "' as a number");
    }
  }
  throw ParseError("field '" + field + "': expected a number or decimal string");
}

inline double json_number_at(const json& parent, const std::string& field) {
  if (!parent.contains(field)) throw ParseError("missing field '" + field + "'");
  return json_number(parent.at(field), field);
}

inline const json& json_require(const json& parent, const std::string& field) {
  if (!parent.contains(field)) throw ParseError("missing field '" + field + "'");
  return parent.at(field);
}

}  // namespace stochround
