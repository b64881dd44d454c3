#include "chirp4/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "chirp4/model.hpp"

namespace chirp4 {
namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

void append_csv_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out += '"';
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

std::string field_text(const Field& f) {
  if (const auto* d = std::get_if<double>(&f)) return format_number(*d);
  return std::get<std::string>(f);
}

nlohmann::ordered_json field_json(const Field& f) {
  if (const auto* d = std::get_if<double>(&f)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the 12-digit text so JSON and CSV carry the same value.
    return std::stod(format_number(*d));
  }
  return std::get<std::string>(f);
}

Field parse_field(std::string text, bool quoted) {
  if (quoted || text.empty()) return text;
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc() && ptr == end) return value;
  return text;
}

}  // namespace

TableFormat parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  throw InputError("unknown table format '" + std::string(name) + "' (expected csv or json)");
}

const char* extension(TableFormat format) { return format == TableFormat::Csv ? ".csv" : ".json"; }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string emit_table(const Table& table, TableFormat format) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw InputError("row " + std::to_string(r) + " has " +
                       std::to_string(table.rows[r].size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
  }

  if (format == TableFormat::Json) {
    nlohmann::ordered_json doc;
    doc["columns"] = table.header;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      auto jr = nlohmann::ordered_json::array();
      for (const auto& f : row) jr.push_back(field_json(f));
      rows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(1) + "\n";
  }

  std::string out;
  auto write_line = [&out](const auto& fields, auto&& to_text) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      append_csv_field(out, to_text(fields[i]));
    }
    out += '\n';
  };
  write_line(table.header, [](const std::string& s) { return s; });
  for (const auto& row : table.rows) write_line(row, field_text);
  return out;
}

Table parse_csv(std::string_view text) {
  std::vector<std::vector<std::pair<std::string, bool>>> lines;
  std::vector<std::pair<std::string, bool>> fields;
  std::string current;
  bool quoted = false;
  bool in_quotes = false;

  auto end_field = [&] {
    fields.emplace_back(std::move(current), quoted);
    current.clear();
    quoted = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
      quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      end_field();
      lines.push_back(std::move(fields));
      fields.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  if (in_quotes) throw InputError("unterminated quoted field in CSV");
  if (!current.empty() || !fields.empty()) {
    end_field();
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw InputError("CSV has no header row");

  Table table;
  for (auto& [name, q] : lines.front()) table.header.push_back(std::move(name));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].size() != table.header.size()) {
      throw InputError("CSV line " + std::to_string(r + 1) + " has " +
                       std::to_string(lines[r].size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    }
    std::vector<Field> row;
    row.reserve(lines[r].size());
    for (auto& [value, q] : lines[r]) row.push_back(parse_field(std::move(value), q));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace chirp4
