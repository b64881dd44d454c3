// Plot-ready tables with byte-stable serialisation.

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chirp4 {

using Field = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Field>> rows;
};

enum class TableFormat { Csv, Json };

TableFormat parse_table_format(std::string_view name);
const char* extension(TableFormat format);

/// 12 significant digits, shortest form ("%.12g"); "-0" is written as "0".
std::string format_number(double value);

/// CSV: header line then one line per row, "\n" line endings.
/// JSON: {"columns": [...], "rows": [[...], ...]}.
/// Throws InputError when a row length differs from the header.
std::string emit_table(const Table& table, TableFormat format);

/// Reads CSV produced by emit_table. Fields that parse completely as numbers
/// become doubles.
Table parse_csv(std::string_view text);

}  // namespace chirp4
