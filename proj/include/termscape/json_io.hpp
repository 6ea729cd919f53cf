#ifndef TERMSCAPE_JSON_IO_HPP
#define TERMSCAPE_JSON_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "termscape/error.hpp"

namespace termscape {

using json = nlohmann::json;

// 17 significant digits; always carries a '.' or exponent so the value reads
// back as a float.
inline std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw StageError("cannot serialize non-finite number");
  }
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string out(buf);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

namespace detail {

inline void write_json_string(std::string& out, const std::string& s) {
  // nlohmann handles escaping and UTF-8 validation
  out += json(s).dump(-1, ' ', false, json::error_handler_t::strict);
}

inline void write_json(std::string& out, const json& value, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      // object_t is a std::map, so iteration order is sorted by key
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_json_string(out, it.key());
        out += indent < 0 ? ":" : ": ";
        write_json(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_json(out, item, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    case json::value_t::string:
      write_json_string(out, value.get_ref<const std::string&>());
      return;
    default:
      out += value.dump();
      return;
  }
}

}  // namespace detail

// Canonical serialization: sorted keys, floats at 17 significant digits.
// indent < 0 gives a single line.
inline std::string canonical_json(const json& value, int indent = -1) {
  std::string out;
  detail::write_json(out, value, indent, 0);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("read failure on '" + path + "'");
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw InputError("write failure on '" + path + "'");
}

inline json parse_json_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

// Intermediate files carry "schema": "<name>/<version>".
inline void check_schema(const json& header, const std::string& expected,
                         const std::string& what) {
  if (!header.is_object() || !header.contains("schema") || !header["schema"].is_string()) {
    throw InputError(what + ": missing schema tag (expected '" + expected + "')");
  }
  const auto& found = header["schema"].get_ref<const std::string&>();
  if (found != expected) {
    throw InputError(what + ": schema version mismatch: found '" + found + "', expected '" +
                     expected + "'");
  }
}

}  // namespace termscape

#endif
