#pragma once

// Tabular output as CSV (header row) or JSON (array of objects). Floats are
// written with 15 significant digits, independent of the C++ locale.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gpfab/core.hpp"

namespace gpfab {

using Cell = std::variant<std::monostate, bool, i64, u64, double, std::string>;

struct Row {
  std::vector<std::pair<std::string, Cell>> cells;

  Row& add(std::string key, Cell value) {
    cells.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw InvalidArgument("unknown output format '" + std::string(s) + "' (expected csv or json)");
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return {buf, r.ptr};
}

namespace detail {

inline std::string cell_text(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(i64 v) const { return std::to_string(v); }
    std::string operator()(u64 v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out + '"';
}

inline std::string json_value(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "null";
  if (const auto* s = std::get_if<std::string>(&c)) return json_string(*s);
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return "null";
  }
  return cell_text(c);
}

}  // namespace detail

/// Writes rows; every row must carry the same keys in the same order.
inline void write_rows(std::ostream& out, const std::vector<Row>& rows, OutputFormat fmt) {
  for (const auto& r : rows) {
    require(r.cells.size() == rows.front().cells.size(), "write_rows: rows have different columns");
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      require(r.cells[i].first == rows.front().cells[i].first, "write_rows: rows have different columns");
  }
  if (fmt == OutputFormat::csv) {
    if (rows.empty()) return;
    const auto& head = rows.front().cells;
    for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << detail::csv_escape(head[i].first);
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.cells.size(); ++i)
        out << (i ? "," : "") << detail::csv_escape(detail::cell_text(r.cells[i].second));
      out << '\n';
    }
    return;
  }
  out << '[';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out << (k ? ",\n " : "\n ") << '{';
    const auto& cells = rows[k].cells;
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << (i ? ", " : "") << detail::json_string(cells[i].first) << ": " << detail::json_value(cells[i].second);
    out << '}';
  }
  out << (rows.empty() ? "]\n" : "\n]\n");
}

}  // namespace gpfab
