#include "swapsim/table.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "swapsim/config.hpp"

namespace swapsim {

namespace {

std::string csv_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_double(*d) : "";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return "";
}

nlohmann::json json_value(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& [k, v] : table.metadata) out << "# " << k << " = " << v << "\n";
  for (const auto& [k, v] : table.summary) out << "# " << k << " = " << csv_text(v) << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_text(row[i]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) j["metadata"][k] = v;
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.summary) j["summary"][k] = json_value(v);
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      r[table.columns[i]] = json_value(row[i]);
    }
    j["rows"].push_back(r);
  }
  for (const auto& [name, m] : table.matrices) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& row : m) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (double v : row) {
        r.push_back(std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr));
      }
      a.push_back(r);
    }
    j[name] = a;
  }
  out << j.dump(2) << "\n";
}

void write_table(std::ostream& out, const Table& table, const std::string& format) {
  if (format == "csv") {
    write_csv(out, table);
  } else if (format == "json") {
    write_json(out, table);
  } else {
    throw std::invalid_argument("unknown output format '" + format + "'");
  }
}

}  // namespace swapsim
