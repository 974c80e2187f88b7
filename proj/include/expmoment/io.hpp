#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "expmoment/core.hpp"

namespace expmoment::io {

/// Decimal with 17 significant digits, enough to re-parse the exact double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Compact JSON text with every float printed by format_double; non-finite
/// floats become null.
inline void dump(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        dump(value, out);
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump(j[i], out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      break;
    }
    default: out += j.dump();
  }
}

inline std::string dump(const nlohmann::json& j) {
  std::string out;
  dump(j, out);
  return out;
}

inline nlohmann::json to_json(const Instance& instance) {
  nlohmann::json j;
  j["amplitudes"] = std::vector<double>(instance.amplitudes().begin(), instance.amplitudes().end());
  j["frequencies"] = std::vector<double>(instance.frequencies().begin(), instance.frequencies().end());
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("amplitudes") || !j.contains("frequencies")) {
    throw Error(ErrorKind::InvalidArgument, "instance JSON needs \"amplitudes\" and \"frequencies\" arrays");
  }
  try {
    return Instance(j.at("amplitudes").get<std::vector<double>>(), j.at("frequencies").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("instance JSON: ") + e.what());
  }
}

inline std::string serialize(const Instance& instance) { return dump(to_json(instance)); }

inline Instance parse_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed instance JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open instance file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

inline void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << serialize(instance) << '\n';
}

namespace detail {

inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (...) {
      throw Error(ErrorKind::InvalidArgument, "bad number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw Error(ErrorKind::InvalidArgument, "bad number '" + item + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace detail

/// Parses the inline form "a=1,2;phi=0,1".
inline Instance parse_inline(std::string_view spec) {
  std::vector<double> amplitudes, frequencies;
  bool have_a = false, have_phi = false;
  std::string part;
  std::stringstream ss{std::string(spec)};
  while (std::getline(ss, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "inline instance field '" + part + "'");
    std::string key = part.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string_view value = std::string_view(part).substr(eq + 1);
    if (key == "a") {
      amplitudes = detail::parse_number_list(value);
      have_a = true;
    } else if (key == "phi") {
      frequencies = detail::parse_number_list(value);
      have_phi = true;
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown inline key '" + key + "'");
    }
  }
  if (!have_a || !have_phi) throw Error(ErrorKind::InvalidArgument, "inline instance needs a=... and phi=...");
  return Instance(std::move(amplitudes), std::move(frequencies));
}

}  // namespace expmoment::io
