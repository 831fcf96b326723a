#pragma once

#include <span>
#include <string_view>

namespace techcycle {

/// Simple (one-regressor) least-squares fit y = intercept + slope * x with
/// the classical inferential statistics.
struct OlsFit {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
  double t_intercept = 0.0;
  double t_slope = 0.0;
  double p_intercept = 1.0;
  double p_slope = 1.0;
  double r2 = 0.0;
  double r2_adj = 0.0;
  double se_estimate = 0.0;  // residual standard error, sqrt(SSE / df)
  double f_stat = 0.0;
  double p_f = 1.0;
  int n = 0;
  int df = 0;  // n - 2
};

/// Throws Error(InsufficientData) for n < 3 or mismatched lengths and
/// Error(DegenerateRegressor) when xs has zero variance.
///
/// An exact fit (zero residual sum of squares) reports se_estimate = 0,
/// r2 = 1 and infinite t/F statistics with p = 0.
OlsFit ols_simple(std::span<const double> xs, std::span<const double> ys);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `df`
/// degrees of freedom. Throws Error(Domain) for df < 1.
double t_p_value(double t, int df);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double x, double a, double b);

/// "***" p <= 0.01, "**" p <= 0.05, "*" p <= 0.10, "" otherwise.
std::string_view significance_stars(double p) noexcept;

}  // namespace techcycle
