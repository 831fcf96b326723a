#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace techcycle::cli {

enum class OutputFormat { Text, Csv, Json };

OutputFormat parse_format(std::string_view s);
std::string_view extension(OutputFormat f) noexcept;

// monostate renders as "-" in text, an empty CSV cell and JSON null.
using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

Cell cell(std::optional<int> v);
Cell cell(std::optional<double> v);

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // free-text lines printed under the text table

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Text: aligned columns, doubles at 2 decimals. CSV and JSON: doubles at
/// shortest round-trip precision.
std::string render(const Table& t, OutputFormat f);
std::string render_text(const Table& t);
std::string render_csv(const Table& t);
std::string render_json(const Table& t);

/// Shortest decimal string that parses back to exactly `v`.
std::string exact_number(double v);
std::string fixed2(double v);

}  // namespace techcycle::cli
