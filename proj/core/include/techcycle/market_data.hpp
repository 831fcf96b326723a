#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "techcycle/config.hpp"

namespace techcycle {

inline constexpr int kDefaultBaseYear = 2018;

/// Closed range of calendar years.
struct YearInterval {
  int first = 0;
  int last = 0;

  bool contains(int year) const noexcept { return year >= first && year <= last; }
  int span_years() const noexcept { return last - first + 1; }

  friend auto operator<=>(const YearInterval&, const YearInterval&) = default;
};

/// Parses `Y1:Y2`; throws Error(Parse) on anything else, including Y2 < Y1.
YearInterval parse_year_interval(std::string_view text);
std::string to_string(const YearInterval& w);

/// One row of a per-format revenue table. Monetary values are millions of
/// dollars; `revenue_real` is in base-year dollars.
struct RevenueRecord {
  int year = 0;
  std::string format;
  std::optional<double> revenue_nominal;
  std::optional<double> revenue_real;
  std::optional<double> units;

  friend bool operator==(const RevenueRecord&, const RevenueRecord&) = default;
};

/// Throws Error(Validation) if the record breaks the row invariants.
void validate(const RevenueRecord& r);

/// Annual revenue trajectory of one technology.
///
/// Years absent from `points()` were not tracked; that is different from an
/// explicit zero. `base_year()` is empty for series in current dollars.
class RevenueSeries {
public:
  RevenueSeries() = default;
  RevenueSeries(std::string technology, std::optional<int> base_year, std::map<int, double> points);

  const std::string& technology() const noexcept { return technology_; }
  std::optional<int> base_year() const noexcept { return base_year_; }
  const std::map<int, double>& points() const noexcept { return points_; }

  bool empty() const noexcept { return points_.empty(); }
  std::size_t size() const noexcept { return points_.size(); }
  int first_year() const;
  int last_year() const;
  std::optional<double> value(int year) const;
  bool has_positive() const noexcept;

  /// Calendar years inside [first_year, last_year] with no observation.
  std::vector<int> gaps() const;

  RevenueSeries scaled(double factor) const;
  RevenueSeries shifted(int years) const;

private:
  std::string technology_;
  std::optional<int> base_year_;
  std::map<int, double> points_;
};

struct TechnologyGroup {
  std::string name;
  std::vector<std::string> formats;
};

/// Reads `name = format1; format2; ...` lines. Throws Error(Validation) for an
/// empty format list or a format claimed by two groups.
std::vector<TechnologyGroup> parse_groups(const KeyValueConfig& cfg);

class CpiTable {
public:
  CpiTable(std::map<int, double> entries, int base_year);

  const std::map<int, double>& entries() const noexcept { return entries_; }
  int base_year() const noexcept { return base_year_; }
  bool has(int year) const noexcept { return entries_.contains(year); }
  /// Throws Error(MissingCpiYear) naming the year.
  double index(int year) const;

private:
  std::map<int, double> entries_;
  int base_year_;
};

/// `year,index` CSV.
CpiTable parse_cpi_table(std::string_view text, int base_year);

inline constexpr std::string_view kRevenueHeader =
    "year,format,revenue_nominal_musd,revenue_real_musd,units_m";

std::vector<RevenueRecord> parse_revenue_table(std::string_view text);
std::string serialize_revenue_table(std::span<const RevenueRecord> records);

/// Fills revenue_real = nominal * cpi[base_year] / cpi[year] for records that
/// lack it; records already carrying revenue_real pass through unchanged.
std::vector<RevenueRecord> adjust_inflation(std::span<const RevenueRecord> records,
                                            const CpiTable& cpi, int base_year);

/// Current-dollar view: revenue_real is replaced by revenue_nominal wherever
/// the nominal value exists.
std::vector<RevenueRecord> nominal_basis(std::span<const RevenueRecord> records);

/// Sums revenue_real over the group's formats per year. Years where none of
/// the formats is present stay absent.
RevenueSeries aggregate_group(std::span<const RevenueRecord> records, const TechnologyGroup& group,
                              std::optional<int> base_year);

/// Longest contiguous run of calendar years where both series are strictly
/// positive (earliest run wins ties); nullopt if there is none.
std::optional<YearInterval> positive_overlap_window(const RevenueSeries& a, const RevenueSeries& b);

enum class Basis { Real, Nominal };

std::string_view to_string(Basis b) noexcept;
Basis parse_basis(std::string_view s);

/// Records plus grouping, ready to hand out per-technology series.
class Dataset {
public:
  Dataset(std::vector<RevenueRecord> records, std::vector<TechnologyGroup> groups,
          std::optional<int> base_year);

  const std::vector<RevenueRecord>& records() const noexcept { return records_; }
  const std::vector<TechnologyGroup>& groups() const noexcept { return groups_; }
  std::optional<int> base_year() const noexcept { return base_year_; }

  std::vector<std::string> technology_names() const;
  const TechnologyGroup* find_group(std::string_view name) const;

  /// Throws Error(UnknownTechnology) listing the known names.
  RevenueSeries series(std::string_view name) const;

  /// Sum over every record of the year (all formats, grouped or not).
  double market_total(int year) const;

private:
  std::vector<RevenueRecord> records_;
  std::vector<TechnologyGroup> groups_;
  std::optional<int> base_year_;
};

struct DatasetPaths {
  std::string data;
  std::string cpi;  // may be empty when every row carries revenue_real
  std::string groups;
};

/// Loads, deflates (Basis::Real) or switches to current dollars
/// (Basis::Nominal), and attaches the grouping.
Dataset load_dataset(const DatasetPaths& paths, int base_year, Basis basis = Basis::Real);

}  // namespace techcycle
