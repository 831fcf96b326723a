#include "techcycle/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "techcycle/error.hpp"

namespace techcycle {

void validate(const SyntheticScenario& s) {
  if (s.years.last < s.years.first) throw Error(ErrorKind::Validation, "scenario year range is empty");
  if (!(s.noise_rel >= 0.0 && s.noise_rel < 1.0)) throw Error(ErrorKind::Validation, "noise must lie in [0, 1)");
  for (const auto* p : {&s.p_old, &s.p_new}) {
    if (!(p->k > 0.0) || !(p->b > 0.0)) throw Error(ErrorKind::Validation, "logistic k and b must be positive");
  }
}

std::pair<RevenueSeries, RevenueSeries> generate_scenario(const SyntheticScenario& s) {
  validate(s);
  SplitMix64 rng(s.seed);
  const auto draw = [&](const LogisticParams& p, const char* name) {
    std::map<int, double> pts;
    for (int year = s.years.first; year <= s.years.last; ++year) {
      const double level = logistic_value(p, static_cast<double>(year));
      const double eps = rng.symmetric_unit();
      const double v = s.noise_rel == 0.0 ? level : level * (1.0 + s.noise_rel * eps);
      pts.emplace(year, std::max(v, 0.0));
    }
    return RevenueSeries(name, std::nullopt, std::move(pts));
  };
  auto old_series = draw(s.p_old, "old");
  auto new_series = draw(s.p_new, "new");
  return {std::move(old_series), std::move(new_series)};
}

RecoveryReport recovery_experiment(const SyntheticScenario& s, const WindowPolicy& policy) {
  const auto [old_series, new_series] = generate_scenario(s);

  std::optional<YearInterval> window;
  if (const auto* early = std::get_if<EarlyWindow>(&policy)) {
    if (!(early->fraction > 0.0 && early->fraction < 1.0))
      throw Error(ErrorKind::Window, "early-window fraction must lie in (0, 1)");
    for (int year = s.years.first; year <= s.years.last; ++year) {
      const double t = static_cast<double>(year);
      const bool below = logistic_value(s.p_old, t) < early->fraction * s.p_old.k &&
                         logistic_value(s.p_new, t) < early->fraction * s.p_new.k;
      if (!below) {
        if (window) break;  // keep the first contiguous run
        continue;
      }
      if (!window) window = YearInterval{year, year};
      window->last = year;
    }
  } else {
    window = std::get<YearInterval>(policy);
    window->first = std::max(window->first, s.years.first);
    window->last = std::min(window->last, s.years.last);
    if (window->last < window->first) window.reset();
  }

  int usable = 0;
  if (window) {
    for (int y = window->first; y <= window->last; ++y) {
      if (*old_series.value(y) > 0.0 && *new_series.value(y) > 0.0) ++usable;
    }
  }
  if (usable < 3) {
    throw Error(ErrorKind::Window, "policy window holds " + std::to_string(usable) +
                                       " usable years, need 3; widen the year range, raise the fraction "
                                       "or move the inflection points later");
  }

  RecoveryReport r;
  r.fit = fit_substitution(new_series, old_series, *window);
  r.b_theoretical = implied_exponent(s.p_old, s.p_new);
  r.b_fitted = r.fit.b_exponent;
  r.abs_gap = std::fabs(r.b_fitted - r.b_theoretical);
  r.window_used = r.fit.window;
  for (int y = r.window_used.first; y <= r.window_used.last; ++y) {
    const double t = static_cast<double>(y);
    r.saturation_level = std::max({r.saturation_level, logistic_value(s.p_old, t) / s.p_old.k,
                                   logistic_value(s.p_new, t) / s.p_new.k});
  }
  return r;
}

ScenarioFile parse_scenario(const KeyValueConfig& cfg) {
  ScenarioFile f;
  auto& s = f.scenario;
  s.p_old = {cfg.require_double("k1"), cfg.require_double("a1"), cfg.require_double("b1")};
  s.p_new = {cfg.require_double("k2"), cfg.require_double("a2"), cfg.require_double("b2")};
  s.years.first = static_cast<int>(cfg.get_int("year_start", 0));
  s.years.last = static_cast<int>(cfg.get_int("year_end", 40));
  s.noise_rel = cfg.get_double("noise", 0.0);
  const auto seed = cfg.get_int("seed", 0);
  if (seed < 0) throw Error(ErrorKind::Parse, cfg.source() + ": seed must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  validate(s);

  const auto window = cfg.get("window").value_or("early");
  if (window == "early") {
    f.policy = EarlyWindow{cfg.get_double("fraction", 0.1)};
  } else {
    f.policy = parse_year_interval(window);
  }
  return f;
}

}  // namespace techcycle
