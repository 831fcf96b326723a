#pragma once

#include <optional>
#include <span>
#include <string>

#include "techcycle/market_data.hpp"

namespace techcycle {

/// Begin (A), peak (M) and end (Z) years of one technology's revenue cycle.
/// An empty m_year / z_year means the event has not happened yet (ongoing).
struct CycleEvents {
  std::string technology;
  int a_year = 0;
  std::optional<int> m_year;
  std::optional<int> z_year;
  bool censored = false;  // no end below threshold before the data ran out

  friend bool operator==(const CycleEvents&, const CycleEvents&) = default;
};

struct EventConfig {
  double end_threshold_rel = 0.01;  // end = first year after the peak below this fraction of it
  std::optional<int> a_override;
  // When > 0, a censored end whose final-year revenue is still at or above
  // this fraction of the peak is reported as ongoing instead of as the final
  // data year. 0 disables.
  double ongoing_floor_rel = 0.0;
};

/// Throws Error(NoCycle) when the series has no positive value and
/// Error(Domain) for thresholds outside (0, 1).
CycleEvents detect_events(const RevenueSeries& series, const EventConfig& config = {});

/// Up wave AM = M - A, down wave MZ = Z - M, cycle AZ = Z - A, and the two
/// shares of AZ in percent. Fields depending on an ongoing event are empty.
struct CycleSummary {
  CycleEvents events;
  std::optional<int> am;
  std::optional<int> mz;
  std::optional<int> az;
  std::optional<double> up_share;
  std::optional<double> down_share;
};

/// Throws Error(DegenerateCycle) when AZ is defined and zero, and
/// Error(Validation) when A <= M <= Z is violated.
CycleSummary cycle_metrics(const CycleEvents& events);

/// Z - M. Throws Error(NotYetDefined) while M or Z is ongoing.
int disruption_period(const CycleEvents& events);

struct CrossoverResult {
  int year = 0;
  double established_share = 0.0;  // percent of established + disruptive revenue
};

/// First year (ascending over shared years) where the established
/// technology holds less than half of the pair's revenue; nullopt when that
/// never happens in the data.
std::optional<CrossoverResult> crossover_year(const RevenueSeries& established, const RevenueSeries& disruptive);

/// Arithmetic mean and sample standard deviation (divisor n - 1). The mean is
/// empty for n = 0, the SD for n < 2.
struct ColumnStats {
  int n = 0;
  std::optional<double> mean;
  std::optional<double> sd;
};

ColumnStats describe(std::span<const double> values);

struct CycleAggregate {
  ColumnStats am;
  ColumnStats mz;
  ColumnStats az;
  ColumnStats up_share;
  ColumnStats down_share;
};

/// Per-column statistics over the defined entries only.
CycleAggregate aggregate_cycles(std::span<const CycleSummary> summaries);

}  // namespace techcycle
