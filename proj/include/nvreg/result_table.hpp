#pragma once

// Tabular command output: CSV with '#' metadata lines, or a JSON mirror.
// Numbers are written in shortest round-trip form so equal runs give
// byte-identical files.

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nvreg::output {

inline constexpr const char* kVersion = "0.1.0";

// Empty cells are gaps (undefined phases, failed rows).
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct ResultTable {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string command;
  std::string config_ini;  // effective configuration, re-runnable
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ResultTable> tables;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ptr);
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return csv_escape(v);
      },
      cell);
}

inline nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else return v;
      },
      cell);
}

inline void write_comment_block(std::ostream& out, const std::string& text, const std::string& indent) {
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    out << "#" << indent << text.substr(start, end - start) << "\n";
    if (end == std::string::npos) break;
    start = end + 1;
  }
}

}  // namespace detail

inline void write_csv(std::ostream& out, const Report& report) {
  out << "# nvreg " << kVersion << " " << report.command << "\n";
  if (!report.config_ini.empty()) {
    out << "# config:\n";
    detail::write_comment_block(out, report.config_ini, "   ");
  }
  for (const auto& [k, v] : report.metadata) out << "# " << k << ": " << v << "\n";
  for (std::size_t t = 0; t < report.tables.size(); ++t) {
    const auto& table = report.tables[t];
    if (t > 0) out << "\n";
    out << "# table: " << table.name << "\n";
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << detail::csv_escape(table.columns[i]);
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_cell(row[i]);
      out << "\n";
    }
  }
}

inline nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["program"] = "nvreg";
  j["version"] = kVersion;
  j["command"] = report.command;
  j["config"] = report.config_ini;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metadata) j["metadata"][k] = v;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& table : report.tables) {
    nlohmann::ordered_json t;
    t["name"] = table.name;
    t["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) t["metadata"][k] = v;
    t["columns"] = table.columns;
    t["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto& cell : row) r.push_back(detail::json_cell(cell));
      t["rows"].push_back(std::move(r));
    }
    j["tables"].push_back(std::move(t));
  }
  return j;
}

inline void write_json(std::ostream& out, const Report& report) { out << to_json(report).dump(2) << "\n"; }

}  // namespace nvreg::output
