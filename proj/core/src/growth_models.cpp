#include "techcycle/growth_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "techcycle/error.hpp"

namespace techcycle {

double logistic_value(const LogisticParams& p, double t) noexcept {
  const double z = p.a - p.b * t;
  if (z > 0.0) {
    const double e = std::exp(-z);
    return p.k * e / (1.0 + e);
  }
  return p.k / (1.0 + std::exp(z));
}

double logistic_log_odds(const LogisticParams& p, double t) noexcept { return p.b * t - p.a; }

namespace {

struct Observation {
  double t;
  double v;
};

struct Candidate {
  LogisticParams params;
  double sse = 0.0;
  int used = 0;
  bool valid = false;
};

Candidate evaluate_k(const std::vector<Observation>& obs, double k) {
  Candidate c;
  std::vector<double> ts;
  std::vector<double> ys;
  ts.reserve(obs.size());
  ys.reserve(obs.size());
  for (const auto& o : obs) {
    if (o.v >= k) continue;
    ts.push_back(o.t);
    ys.push_back(std::log((k - o.v) / o.v));
  }
  if (ts.size() < 4) return c;
  const OlsFit line = ols_simple(ts, ys);
  c.params = {k, line.intercept, -line.slope};
  c.used = static_cast<int>(ts.size());
  for (const auto& o : obs) {
    const double r = o.v - logistic_value(c.params, o.t);
    c.sse += r * r;
  }
  c.valid = std::isfinite(c.sse);
  return c;
}

}  // namespace

LogisticFit fit_logistic(const RevenueSeries& series) {
  std::vector<Observation> obs;
  for (const auto& [year, v] : series.points())
    if (v > 0.0) obs.push_back({static_cast<double>(year), v});
  if (obs.size() < 4) {
    throw Error(ErrorKind::InsufficientData, series.technology() + ": logistic fit needs >= 4 positive points, got " +
                                                 std::to_string(obs.size()));
  }
  const double vmax = std::max_element(obs.begin(), obs.end(), [](auto& l, auto& r) { return l.v < r.v; })->v;
  const double scale = std::accumulate(obs.begin(), obs.end(), 0.0, [](double s, auto& o) { return s + o.v * o.v; });
  const double tie_tol = 1e-14 * scale;
  const double step = 4.0 * vmax / kLogisticGridPoints;

  Candidate best;
  int best_index = 0;
  for (int i = 1; i <= kLogisticGridPoints; ++i) {
    const Candidate c = evaluate_k(obs, vmax + step * i);
    if (!c.valid) continue;
    if (!best.valid || c.sse < best.sse - tie_tol) {
      best = c;
      best_index = i;
    }
  }
  if (!best.valid) throw Error(ErrorKind::InsufficientData, series.technology() + ": no admissible k candidate");

  if (best.params.b > 0.0) {
    // Golden-section refinement over the two grid cells around the winner.
    double lo = vmax + step * std::max(best_index - 1, 0) + (best_index == 1 ? 1e-9 * step : 0.0);
    double hi = vmax + step * std::min(best_index + 1, kLogisticGridPoints);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    Candidate c1 = evaluate_k(obs, x1);
    Candidate c2 = evaluate_k(obs, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * vmax; ++it) {
      const double s1 = c1.valid ? c1.sse : HUGE_VAL;
      const double s2 = c2.valid ? c2.sse : HUGE_VAL;
      if (s1 <= s2) {
        hi = x2;
        x2 = x1;
        c2 = c1;
        x1 = hi - kInvPhi * (hi - lo);
        c1 = evaluate_k(obs, x1);
      } else {
        lo = x1;
        x1 = x2;
        c1 = c2;
        x2 = lo + kInvPhi * (hi - lo);
        c2 = evaluate_k(obs, x2);
      }
    }
    for (const auto& c : {c1, c2})
      if (c.valid && c.sse < best.sse) best = c;
  }

  LogisticFit out;
  out.params = best.params;
  out.sse = best.sse;
  out.points_used = best.used;
  out.degenerate_slope = !(best.params.b > 0.0);
  return out;
}

OddsRelation odds_relation(const LogisticParams& p1, const LogisticParams& p2) noexcept {
  const double log_c1 = p1.b * (p2.a / p2.b - p1.a / p1.b);
  return {std::exp(log_c1), p1.b / p2.b, log_c1};
}

double implied_exponent(const LogisticParams& p_old, const LogisticParams& p_new) noexcept {
  return p_new.b / p_old.b;
}

AllometricCoefficient allometric_coefficient(const LogisticParams& p_old, const LogisticParams& p_new) noexcept {
  const double b = implied_exponent(p_old, p_new);
  const double log_c1 = odds_relation(p_old, p_new).log_c1;
  const double log_base = std::log(p_new.k) - b * std::log(p_old.k);
  return {std::exp(log_base - b * log_c1), std::exp(log_base + log_c1)};
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::LowGrowth: return "LowGrowth";
    case Regime::Proportional: return "Proportional";
    case Regime::Acceleration: return "Acceleration";
    case Regime::NegativeCoupling: return "NegativeCoupling";
  }
  return "?";
}

Regime classify_regime(double b, double tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::Domain, "regime tolerance must be positive");
  if (b < 0.0) return Regime::NegativeCoupling;
  if (std::fabs(b - 1.0) <= tolerance) return Regime::Proportional;
  if (b < 1.0) return Regime::LowGrowth;
  return Regime::Acceleration;
}

SubstitutionFit fit_substitution(const RevenueSeries& disruptive, const RevenueSeries& established,
                                 std::optional<YearInterval> window, double tolerance) {
  const std::string pair = disruptive.technology() + " vs " + established.technology();
  const bool automatic = !window.has_value();
  if (automatic) {
    window = positive_overlap_window(established, disruptive);
    if (!window) throw Error(ErrorKind::InsufficientData, pair + ": no year where both series are positive");
  }

  std::vector<double> xs;
  std::vector<double> ys;
  std::optional<YearInterval> used;
  for (int year = window->first; year <= window->last; ++year) {
    const auto ve = established.value(year);
    const auto vd = disruptive.value(year);
    if (!ve || !vd) continue;
    if (!(*ve > 0.0) || !(*vd > 0.0)) {
      throw Error(ErrorKind::Domain, pair + ": non-positive revenue in " + std::to_string(year) +
                                         " inside window " + to_string(*window));
    }
    xs.push_back(std::log(*ve));
    ys.push_back(std::log(*vd));
    if (!used) used = YearInterval{year, year};
    used->last = year;
  }
  if (xs.size() < 3) {
    throw Error(ErrorKind::InsufficientData, pair + ": window " + to_string(*window) + " has " +
                                                 std::to_string(xs.size()) + " usable years, need 3");
  }

  SubstitutionFit out;
  out.fit = ols_simple(xs, ys);
  out.log_a = out.fit.intercept;
  out.b_exponent = out.fit.slope;
  out.window = *used;
  out.regime = classify_regime(out.b_exponent, tolerance);
  return out;
}

}  // namespace techcycle
