#include "techcycle/market_data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <utility>

#include "techcycle/error.hpp"

namespace techcycle {

namespace {

constexpr int kMinYear = 1900;
constexpr int kMaxYear = 2100;

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// Splits one CSV line. Double quotes may wrap a field; "" inside quotes is a
// literal quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      field_started_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, "row " + std::to_string(row) + ": unterminated quote");
  fields.push_back(std::move(current));
  return fields;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    fn(line, line_no);
    start = end + 1;
  }
}

std::string_view strip_bom(std::string_view text) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF)
    text.remove_prefix(3);
  return text;
}

std::optional<double> optional_cell(const std::string& cell, std::size_t row, std::string_view column) {
  const auto t = trim(cell);
  if (t.empty()) return std::nullopt;
  const auto v = parse_double(t);
  if (!v) {
    throw Error(ErrorKind::Parse, "row " + std::to_string(row) + ", column " + std::string(column) +
                                      ": malformed number '" + std::string(t) + "'");
  }
  return v;
}

}  // namespace

YearInterval parse_year_interval(std::string_view text) {
  const auto t = trim(text);
  const auto colon = t.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::Parse, "window must be Y1:Y2, got '" + std::string(t) + "'");
  const auto a = parse_int(t.substr(0, colon));
  const auto b = parse_int(t.substr(colon + 1));
  if (!a || !b) throw Error(ErrorKind::Parse, "window must be Y1:Y2, got '" + std::string(t) + "'");
  if (*b < *a) throw Error(ErrorKind::Parse, "window end precedes start in '" + std::string(t) + "'");
  return {static_cast<int>(*a), static_cast<int>(*b)};
}

std::string to_string(const YearInterval& w) {
  return std::to_string(w.first) + ":" + std::to_string(w.last);
}

void validate(const RevenueRecord& r) {
  const std::string where = std::to_string(r.year) + " " + r.format;
  if (r.year < kMinYear || r.year > kMaxYear)
    throw Error(ErrorKind::Validation, where + ": year outside [1900, 2100]");
  if (r.format.empty()) throw Error(ErrorKind::Validation, where + ": empty format label");
  if (!r.revenue_nominal && !r.revenue_real)
    throw Error(ErrorKind::Validation, where + ": neither nominal nor real revenue present");
  for (const auto& v : {r.revenue_nominal, r.revenue_real, r.units}) {
    if (v && !(*v >= 0.0)) throw Error(ErrorKind::Validation, where + ": negative or NaN value");
  }
}

RevenueSeries::RevenueSeries(std::string technology, std::optional<int> base_year,
                             std::map<int, double> points)
    : technology_(std::move(technology)), base_year_(base_year), points_(std::move(points)) {
  for (const auto& [year, v] : points_) {
    if (!(v >= 0.0)) {
      throw Error(ErrorKind::Validation, technology_ + ": negative or NaN revenue in " + std::to_string(year));
    }
  }
}

int RevenueSeries::first_year() const {
  if (points_.empty()) throw Error(ErrorKind::InsufficientData, technology_ + ": empty series");
  return points_.begin()->first;
}

int RevenueSeries::last_year() const {
  if (points_.empty()) throw Error(ErrorKind::InsufficientData, technology_ + ": empty series");
  return points_.rbegin()->first;
}

std::optional<double> RevenueSeries::value(int year) const {
  const auto it = points_.find(year);
  if (it == points_.end()) return std::nullopt;
  return it->second;
}

bool RevenueSeries::has_positive() const noexcept {
  return std::any_of(points_.begin(), points_.end(), [](const auto& p) { return p.second > 0.0; });
}

std::vector<int> RevenueSeries::gaps() const {
  std::vector<int> out;
  if (points_.empty()) return out;
  int expected = points_.begin()->first;
  for (const auto& [year, v] : points_) {
    for (; expected < year; ++expected) out.push_back(expected);
    expected = year + 1;
  }
  return out;
}

RevenueSeries RevenueSeries::scaled(double factor) const {
  std::map<int, double> pts;
  for (const auto& [y, v] : points_) pts.emplace(y, v * factor);
  return {technology_, base_year_, std::move(pts)};
}

RevenueSeries RevenueSeries::shifted(int years) const {
  std::map<int, double> pts;
  for (const auto& [y, v] : points_) pts.emplace(y + years, v);
  return {technology_, base_year_, std::move(pts)};
}

std::vector<TechnologyGroup> parse_groups(const KeyValueConfig& cfg) {
  std::vector<TechnologyGroup> groups;
  std::set<std::string> claimed;
  for (const auto& [name, value] : cfg.entries()) {
    TechnologyGroup g{name, split_list(value, ';')};
    if (g.formats.empty()) throw Error(ErrorKind::Validation, "group '" + name + "' has no formats");
    for (const auto& f : g.formats) {
      if (!claimed.insert(f).second)
        throw Error(ErrorKind::Validation, "format '" + f + "' appears in more than one group");
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

CpiTable::CpiTable(std::map<int, double> entries, int base_year)
    : entries_(std::move(entries)), base_year_(base_year) {
  for (const auto& [year, idx] : entries_) {
    if (!(idx > 0.0))
      throw Error(ErrorKind::Validation, "CPI index for " + std::to_string(year) + " is not positive");
  }
  if (!entries_.contains(base_year_))
    throw Error(ErrorKind::MissingCpiYear, "CPI table has no entry for base year " + std::to_string(base_year_));
}

double CpiTable::index(int year) const {
  const auto it = entries_.find(year);
  if (it == entries_.end())
    throw Error(ErrorKind::MissingCpiYear, "CPI table has no entry for " + std::to_string(year));
  return it->second;
}

CpiTable parse_cpi_table(std::string_view text, int base_year) {
  std::map<int, double> entries;
  bool header_seen = false;
  for_each_line(strip_bom(text), [&](std::string_view line, std::size_t row) {
    if (trim(line).empty()) return;
    if (!header_seen) {
      if (trim(line) != "year,index")
        throw Error(ErrorKind::Parse, "cpi table: expected header 'year,index'");
      header_seen = true;
      return;
    }
    const auto fields = split_csv_line(line, row);
    if (fields.size() != 2)
      throw Error(ErrorKind::Parse, "cpi table row " + std::to_string(row) + ": expected 2 fields");
    const auto year = parse_int(fields[0]);
    if (!year) throw Error(ErrorKind::Parse, "cpi table row " + std::to_string(row) + ", column year: malformed");
    const auto idx = parse_double(fields[1]);
    if (!idx) throw Error(ErrorKind::Parse, "cpi table row " + std::to_string(row) + ", column index: malformed");
    if (!entries.emplace(static_cast<int>(*year), *idx).second)
      throw Error(ErrorKind::Duplicate, "cpi table: year " + std::to_string(*year) + " repeated");
  });
  if (!header_seen) throw Error(ErrorKind::Parse, "cpi table: missing header");
  return CpiTable(std::move(entries), base_year);
}

std::vector<RevenueRecord> parse_revenue_table(std::string_view text) {
  std::vector<RevenueRecord> out;
  std::set<std::pair<int, std::string>> seen;
  bool header_seen = false;
  for_each_line(strip_bom(text), [&](std::string_view line, std::size_t row) {
    if (trim(line).empty()) return;
    if (!header_seen) {
      if (trim(line) != kRevenueHeader)
        throw Error(ErrorKind::Parse, "revenue table: expected header '" + std::string(kRevenueHeader) + "'");
      header_seen = true;
      return;
    }
    const auto fields = split_csv_line(line, row);
    if (fields.size() != 5) {
      throw Error(ErrorKind::Parse, "row " + std::to_string(row) + ": expected 5 fields, got " +
                                        std::to_string(fields.size()));
    }
    RevenueRecord r;
    const auto year = parse_int(fields[0]);
    if (!year) {
      throw Error(ErrorKind::Parse, "row " + std::to_string(row) + ", column year: malformed number '" +
                                        fields[0] + "'");
    }
    r.year = static_cast<int>(*year);
    r.format = std::string(trim(fields[1]));
    r.revenue_nominal = optional_cell(fields[2], row, "revenue_nominal_musd");
    r.revenue_real = optional_cell(fields[3], row, "revenue_real_musd");
    r.units = optional_cell(fields[4], row, "units_m");
    try {
      validate(r);
    } catch (const Error& e) {
      throw Error(e.kind(), "row " + std::to_string(row) + ": " + e.what());
    }
    if (!seen.emplace(r.year, r.format).second) {
      throw Error(ErrorKind::Duplicate, "row " + std::to_string(row) + ": duplicate (" +
                                            std::to_string(r.year) + ", " + r.format + ")");
    }
    out.push_back(std::move(r));
  });
  if (!header_seen && !trim(text).empty()) throw Error(ErrorKind::Parse, "revenue table: missing header");
  return out;
}

std::string serialize_revenue_table(std::span<const RevenueRecord> records) {
  std::string out(kRevenueHeader);
  out += '\n';
  const auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : records) {
    out += std::to_string(r.year);
    out += ',';
    out += quote_if_needed(r.format);
    out += ',';
    out += cell(r.revenue_nominal);
    out += ',';
    out += cell(r.revenue_real);
    out += ',';
    out += cell(r.units);
    out += '\n';
  }
  return out;
}

std::vector<RevenueRecord> adjust_inflation(std::span<const RevenueRecord> records, const CpiTable& cpi,
                                            int base_year) {
  const double base_index = cpi.index(base_year);
  std::vector<RevenueRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    if (r.revenue_real || !r.revenue_nominal) continue;
    r.revenue_real = *r.revenue_nominal * base_index / cpi.index(r.year);
  }
  return out;
}

std::vector<RevenueRecord> nominal_basis(std::span<const RevenueRecord> records) {
  std::vector<RevenueRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    if (r.revenue_nominal) r.revenue_real = r.revenue_nominal;
  }
  return out;
}

RevenueSeries aggregate_group(std::span<const RevenueRecord> records, const TechnologyGroup& group,
                              std::optional<int> base_year) {
  const std::set<std::string_view> members(group.formats.begin(), group.formats.end());
  std::map<int, double> sums;
  bool matched = false;
  for (const auto& r : records) {
    if (!members.contains(r.format)) continue;
    matched = true;
    if (!r.revenue_real) {
      throw Error(ErrorKind::Validation, std::to_string(r.year) + " " + r.format +
                                             ": record not inflation-adjusted (no revenue_real)");
    }
    sums[r.year] += *r.revenue_real;
  }
  if (!matched) throw Error(ErrorKind::EmptyGroup, "group '" + group.name + "' matches no record");
  return RevenueSeries(group.name, base_year, std::move(sums));
}

std::optional<YearInterval> positive_overlap_window(const RevenueSeries& a, const RevenueSeries& b) {
  std::optional<YearInterval> best;
  std::optional<YearInterval> run;
  for (const auto& [year, va] : a.points()) {
    const auto vb = b.value(year);
    const bool ok = va > 0.0 && vb && *vb > 0.0;
    if (!ok) {
      run.reset();
      continue;
    }
    if (run && run->last + 1 == year) {
      run->last = year;
    } else {
      run = YearInterval{year, year};
    }
    if (!best || run->span_years() > best->span_years()) best = run;
  }
  return best;
}

std::string_view to_string(Basis b) noexcept { return b == Basis::Real ? "real" : "nominal"; }

Basis parse_basis(std::string_view s) {
  s = trim(s);
  if (s == "real") return Basis::Real;
  if (s == "nominal") return Basis::Nominal;
  throw Error(ErrorKind::Parse, "basis must be 'real' or 'nominal', got '" + std::string(s) + "'");
}

Dataset::Dataset(std::vector<RevenueRecord> records, std::vector<TechnologyGroup> groups,
                 std::optional<int> base_year)
    : records_(std::move(records)), groups_(std::move(groups)), base_year_(base_year) {}

std::vector<std::string> Dataset::technology_names() const {
  std::vector<std::string> names;
  names.reserve(groups_.size());
  for (const auto& g : groups_) names.push_back(g.name);
  return names;
}

const TechnologyGroup* Dataset::find_group(std::string_view name) const {
  for (const auto& g : groups_)
    if (g.name == name) return &g;
  return nullptr;
}

RevenueSeries Dataset::series(std::string_view name) const {
  const auto* g = find_group(name);
  if (!g) {
    std::string known;
    for (const auto& n : technology_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::UnknownTechnology, "unknown technology '" + std::string(name) + "' (known: " + known + ")");
  }
  return aggregate_group(records_, *g, base_year_);
}

double Dataset::market_total(int year) const {
  double total = 0.0;
  for (const auto& r : records_)
    if (r.year == year && r.revenue_real) total += *r.revenue_real;
  return total;
}

Dataset load_dataset(const DatasetPaths& paths, int base_year, Basis basis) {
  auto records = parse_revenue_table(read_file(paths.data));
  auto groups = parse_groups(KeyValueConfig::load(paths.groups));
  if (basis == Basis::Nominal) return Dataset(nominal_basis(records), std::move(groups), std::nullopt);
  if (paths.cpi.empty()) {
    for (const auto& r : records) {
      if (!r.revenue_real) {
        throw Error(ErrorKind::MissingCpiYear, "no CPI table given and " + std::to_string(r.year) + " " +
                                                   r.format + " has only nominal revenue");
      }
    }
    return Dataset(std::move(records), std::move(groups), base_year);
  }
  const auto cpi = parse_cpi_table(read_file(paths.cpi), base_year);
  return Dataset(adjust_inflation(records, cpi, base_year), std::move(groups), base_year);
}

}  // namespace techcycle
