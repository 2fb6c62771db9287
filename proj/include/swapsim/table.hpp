#pragma once

// Tabular results with run metadata, written as CSV or JSON.
//
// CSV: "# key = value" lines (metadata, then summary), a header row, then
// data rows. Floats carry 17 significant digits; non-finite values are
// written as empty fields. JSON: {"metadata", "summary", "columns", "rows"}
// with rows as objects, plus one nested array per entry of `matrices`;
// non-finite values become null. CSV leaves `matrices` out (their entries
// are expected to appear in the rows as well).

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace swapsim {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> matrices;
};

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

// "csv" or "json"; throws std::invalid_argument otherwise.
void write_table(std::ostream& out, const Table& table, const std::string& format);

}  // namespace swapsim
