#include "techcycle/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "techcycle/error.hpp"

namespace techcycle {

namespace {

// Continued fraction for the incomplete beta, modified Lentz evaluation.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::Domain, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::Domain, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double t_p_value(double t, int df) {
  if (df < 1) throw Error(ErrorKind::Domain, "t distribution needs df >= 1, got " + std::to_string(df));
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double nu = static_cast<double>(df);
  // P(|T| >= t) = I_{nu / (nu + t^2)}(nu / 2, 1 / 2)
  return regularized_incomplete_beta(nu / (nu + t * t), 0.5 * nu, 0.5);
}

std::string_view significance_stars(double p) noexcept {
  if (p <= 0.01) return "***";
  if (p <= 0.05) return "**";
  if (p <= 0.10) return "*";
  return "";
}

OlsFit ols_simple(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorKind::InsufficientData, "ols: xs and ys differ in length");
  const std::size_t n = xs.size();
  if (n < 3) throw Error(ErrorKind::InsufficientData, "ols: need at least 3 observations, got " + std::to_string(n));

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateRegressor, "ols: regressor has zero variance");

  OlsFit f;
  f.n = static_cast<int>(n);
  f.df = f.n - 2;
  f.slope = sxy / sxx;
  f.intercept = mean_y - f.slope * mean_x;

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    sse += r * r;
  }
  const double df = static_cast<double>(f.df);
  const double ssr = f.slope * f.slope * sxx;

  if (sse == 0.0 || syy == 0.0) {
    f.r2 = 1.0;
  } else {
    f.r2 = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  f.r2_adj = 1.0 - (1.0 - f.r2) * (static_cast<double>(n) - 1.0) / df;

  const double s2 = sse / df;
  f.se_estimate = std::sqrt(s2);
  f.se_slope = std::sqrt(s2 / sxx);
  f.se_intercept = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mean_x * mean_x / sxx));

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto ratio = [&](double coef, double se) {
    if (se > 0.0) return coef / se;
    return coef == 0.0 ? 0.0 : std::copysign(kInf, coef);
  };
  f.t_slope = ratio(f.slope, f.se_slope);
  f.t_intercept = ratio(f.intercept, f.se_intercept);
  f.p_slope = t_p_value(f.t_slope, f.df);
  f.p_intercept = t_p_value(f.t_intercept, f.df);

  if (sse > 0.0) {
    f.f_stat = ssr / s2;
    // Upper tail of F(1, df), evaluated independently of the t route.
    f.p_f = regularized_incomplete_beta(df / (df + f.f_stat), 0.5 * df, 0.5);
  } else {
    f.f_stat = ssr > 0.0 ? kInf : 0.0;
    f.p_f = ssr > 0.0 ? 0.0 : 1.0;
  }
  return f;
}

}  // namespace techcycle
