#include "table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "techcycle/error.hpp"

namespace techcycle::cli {

OutputFormat parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(ErrorKind::Parse, "format must be text, csv or json, got '" + std::string(s) + "'");
}

std::string_view extension(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::Text: return "txt";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
  }
  return "txt";
}

Cell cell(std::optional<int> v) {
  if (!v) return std::monostate{};
  return static_cast<std::int64_t>(*v);
}

Cell cell(std::optional<double> v) {
  if (!v) return std::monostate{};
  return *v;
}

std::string exact_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string fixed2(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  std::string s(buf.data());
  if (s == "-0.00") s = "0.00";
  return s;
}

namespace {

std::string text_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "-";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else return fixed2(v);
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, std::string>) return csv_escape(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else return exact_number(v);
      },
      c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return exact_number(v);
          return v;
        } else return v;
      },
      c);
}

}  // namespace

std::string render_text(const Table& t) {
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : t.rows) {
    auto& out = cells.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      out.push_back(text_cell(row[i]));
      if (i < width.size()) width[i] = std::max(width[i], out.back().size());
    }
  }
  const auto line = [&](const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += "  ";
      const auto pad = width[i] > fields[i].size() ? width[i] - fields[i].size() : 0;
      if (i == 0) s += fields[i] + std::string(pad, ' ');
      else s += std::string(pad, ' ') + fields[i];
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + '\n';
  };

  std::string out;
  if (!t.title.empty()) out += t.title + '\n';
  out += line(t.columns);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + '\n';
  for (const auto& row : cells) out += line(row);
  for (const auto& n : t.notes) out += n + '\n';
  return out;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_escape(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t) {
  nlohmann::ordered_json j;
  j["title"] = t.title;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  if (!t.notes.empty()) j["notes"] = t.notes;
  return j.dump(2) + '\n';
}

std::string render(const Table& t, OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return render_text(t);
    case OutputFormat::Csv: return render_csv(t);
    case OutputFormat::Json: return render_json(t);
  }
  return render_text(t);
}

}  // namespace techcycle::cli
