#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace magnonic {

using Cell = std::variant<double, long long, std::string>;

/// Column-labelled rows, the common currency of every CLI dataset.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { Csv, Json };

/// Locale-independent, 12 significant digits; "nan"/"inf"/"-inf" for non-finite values.
std::string format_number(double value);

/// CSV: header row then one line per row. JSON: one object per line, keys in column order.
void write_table(const Table& table, Format format, std::ostream& out);

}  // namespace magnonic
