#include "techcycle/cycle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "techcycle/error.hpp"

namespace techcycle {

CycleEvents detect_events(const RevenueSeries& series, const EventConfig& config) {
  if (!(config.end_threshold_rel > 0.0 && config.end_threshold_rel < 1.0))
    throw Error(ErrorKind::Domain, "end threshold must lie in (0, 1)");
  if (!(config.ongoing_floor_rel >= 0.0 && config.ongoing_floor_rel < 1.0))
    throw Error(ErrorKind::Domain, "ongoing floor must lie in [0, 1)");
  if (!series.has_positive()) throw Error(ErrorKind::NoCycle, series.technology() + ": no positive revenue");

  const auto& pts = series.points();
  CycleEvents ev;
  ev.technology = series.technology();

  int first_positive = 0;
  for (const auto& [year, v] : pts) {
    if (v > 0.0) {
      first_positive = year;
      break;
    }
  }
  ev.a_year = config.a_override.value_or(first_positive);

  int peak_year = pts.begin()->first;
  double peak = -1.0;
  for (const auto& [year, v] : pts) {
    if (v > peak) {  // strict: ties keep the earliest year
      peak = v;
      peak_year = year;
    }
  }

  const int last_year = pts.rbegin()->first;
  if (peak_year != last_year) {
    ev.m_year = peak_year;
    const double threshold = config.end_threshold_rel * peak;
    for (auto it = pts.upper_bound(peak_year); it != pts.end(); ++it) {
      if (it->second < threshold) {
        ev.z_year = it->first;
        break;
      }
    }
    if (!ev.z_year) {
      ev.censored = true;
      const double final_value = pts.rbegin()->second;
      if (!(config.ongoing_floor_rel > 0.0 && final_value >= config.ongoing_floor_rel * peak))
        ev.z_year = last_year;
    }
  } else {
    ev.censored = true;
  }

  if (ev.m_year && ev.a_year > *ev.m_year) {
    throw Error(ErrorKind::Validation, ev.technology + ": begin year " + std::to_string(ev.a_year) +
                                           " is after peak year " + std::to_string(*ev.m_year));
  }
  return ev;
}

CycleSummary cycle_metrics(const CycleEvents& events) {
  const auto& e = events;
  if ((e.m_year && e.a_year > *e.m_year) || (e.m_year && e.z_year && *e.m_year > *e.z_year) ||
      (!e.m_year && e.z_year)) {
    throw Error(ErrorKind::Validation, e.technology + ": events violate A <= M <= Z");
  }
  CycleSummary s;
  s.events = e;
  if (e.m_year) s.am = *e.m_year - e.a_year;
  if (e.m_year && e.z_year) s.mz = *e.z_year - *e.m_year;
  if (e.z_year) {
    s.az = *e.z_year - e.a_year;
    if (*s.az == 0) throw Error(ErrorKind::DegenerateCycle, e.technology + ": zero-length cycle");
    s.up_share = 100.0 * static_cast<double>(*s.am) / static_cast<double>(*s.az);
    s.down_share = 100.0 * static_cast<double>(*s.mz) / static_cast<double>(*s.az);
  }
  return s;
}

int disruption_period(const CycleEvents& events) {
  if (!events.m_year || !events.z_year)
    throw Error(ErrorKind::NotYetDefined, events.technology + ": disruption period needs both peak and end");
  return *events.z_year - *events.m_year;
}

std::optional<CrossoverResult> crossover_year(const RevenueSeries& established, const RevenueSeries& disruptive) {
  for (const auto& [year, old_value] : established.points()) {
    const auto new_value = disruptive.value(year);
    if (!new_value) continue;
    const double total = old_value + *new_value;
    if (!(total > 0.0)) continue;
    const double share = old_value / total;
    if (share < 0.5) return CrossoverResult{year, 100.0 * share};
  }
  return std::nullopt;
}

ColumnStats describe(std::span<const double> values) {
  ColumnStats s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  s.mean = mean;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

CycleAggregate aggregate_cycles(std::span<const CycleSummary> summaries) {
  std::vector<double> am, mz, az, up, down;
  for (const auto& s : summaries) {
    if (s.am) am.push_back(*s.am);
    if (s.mz) mz.push_back(*s.mz);
    if (s.az) az.push_back(*s.az);
    if (s.up_share) up.push_back(*s.up_share);
    if (s.down_share) down.push_back(*s.down_share);
  }
  return {describe(am), describe(mz), describe(az), describe(up), describe(down)};
}

}  // namespace techcycle
