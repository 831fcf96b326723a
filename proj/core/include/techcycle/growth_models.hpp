#pragma once

#include <optional>
#include <string_view>

#include "techcycle/market_data.hpp"
#include "techcycle/regress.hpp"

namespace techcycle {

/// S-curve level(t) = k / (1 + exp(a - b t)). Inflection at t = a / b.
struct LogisticParams {
  double k = 1.0;  // equilibrium level
  double a = 0.0;  // location constant
  double b = 1.0;  // rate of growth per year

  double inflection_time() const noexcept { return a / b; }
};

/// Overflow-safe logistic evaluation.
double logistic_value(const LogisticParams& p, double t) noexcept;

/// log(level / (k - level)) = b t - a, evaluated without forming the level.
double logistic_log_odds(const LogisticParams& p, double t) noexcept;

struct LogisticFit {
  LogisticParams params;
  double sse = 0.0;               // level-space residual sum of squares
  int points_used = 0;
  bool degenerate_slope = false;  // fitted b <= 0: no S-shaped growth in the data
};

/// Grid search over k in (max V, 5 max V] (kLogisticGridPoints candidates),
/// each candidate fitted by regressing log((k - V) / V) on t; the best grid
/// cell is then refined by golden-section search. Candidates are scored by
/// level-space SSE; ties keep the smaller k.
///
/// Throws Error(InsufficientData) with fewer than four positive points.
LogisticFit fit_logistic(const RevenueSeries& series);

inline constexpr int kLogisticGridPoints = 400;

/// Exact relation between the odds of two logistics sharing a time axis:
/// V / (k1 - V) = c1 * (KI / (k2 - KI))^exponent.
struct OddsRelation {
  double c1 = 1.0;
  double exponent = 1.0;  // b1 / b2
  double log_c1 = 0.0;    // finite even where c1 over- or underflows
};

OddsRelation odds_relation(const LogisticParams& p1, const LogisticParams& p2) noexcept;

/// b_new / b_old.
double implied_exponent(const LogisticParams& p_old, const LogisticParams& p_new) noexcept;

/// Scale factor of the early-phase power law KI ~ A V^B, B = b_new / b_old.
///
/// `derived` follows from inverting the odds relation and letting
/// odds ~ level / k: A = k_new / k_old^B * c1^(-B).
/// `as_printed` is the form K2 / K1^B * c1 with c1 = exp(b_old (t_new - t_old)).
/// Only `derived` reproduces KI / V^B in the early-phase limit.
struct AllometricCoefficient {
  double derived = 0.0;
  double as_printed = 0.0;
};

AllometricCoefficient allometric_coefficient(const LogisticParams& p_old, const LogisticParams& p_new) noexcept;

enum class Regime { LowGrowth, Proportional, Acceleration, NegativeCoupling };

std::string_view to_string(Regime r) noexcept;

inline constexpr double kDefaultRegimeTolerance = 0.05;

/// b < 0 NegativeCoupling; |b - 1| <= tol Proportional; b < 1 - tol
/// LowGrowth; otherwise Acceleration. Throws Error(Domain) for tol <= 0.
Regime classify_regime(double b, double tolerance = kDefaultRegimeTolerance);

/// log KI_t = log A + B log V_t fitted by OLS.
struct SubstitutionFit {
  double log_a = 0.0;
  double b_exponent = 0.0;
  OlsFit fit;
  YearInterval window;
  Regime regime = Regime::Proportional;
};

/// Regresses log(disruptive) on log(established) over `window`, or over
/// positive_overlap_window when `window` is empty. Years missing from either
/// series are skipped; a non-positive value inside an explicit window throws
/// Error(Domain) naming the year; fewer than three usable years throws
/// Error(InsufficientData).
SubstitutionFit fit_substitution(const RevenueSeries& disruptive, const RevenueSeries& established,
                                 std::optional<YearInterval> window,
                                 double tolerance = kDefaultRegimeTolerance);

}  // namespace techcycle
