// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "techcycle/cycle.hpp"
#include "techcycle/growth_models.hpp"
#include "techcycle/regress.hpp"
#include "techcycle/synthlab.hpp"

using namespace techcycle;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double elapsed_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool near(double got, double want, double tol) { return std::fabs(got - want) <= tol; }

cli::RunConfig study_config() {
  auto cfg = cli::default_run_config();
  cli::apply_config_file(cfg, fixtures::data_file("riaa_study.cfg"));
  return cfg;
}

CycleEvents ev(std::string name, int a, std::optional<int> m, std::optional<int> z) {
  return CycleEvents{std::move(name), a, m, z, false};
}

Outcome criterion1() {
  Outcome o;
  std::vector<CycleSummary> rows;
  CycleAggregate agg;
  double best = 1e9;
  for (int rep = 0; rep < 5; ++rep) {
    best = std::min(best, elapsed_ms([&] {
      rows = {cycle_metrics(ev("vinyl", 1930, 1979, 2019)), cycle_metrics(ev("8-track", 1965, 1978, 1982)),
              cycle_metrics(ev("cassette", 1964, 1990, 2005)), cycle_metrics(ev("cd", 1983, 2001, 2019)),
              cycle_metrics(ev("download", 2004, 2012, std::nullopt))};
      agg = aggregate_cycles(rows);
    }));
  }
  const int am[] = {49, 13, 26, 18, 8};
  const int mz[] = {40, 4, 15, 18};
  const int az[] = {89, 17, 41, 36};
  for (int i = 0; i < 5; ++i) o.require(rows[i].am == am[i], "AM row " + std::to_string(i + 1));
  for (int i = 0; i < 4; ++i) {
    o.require(rows[i].mz == mz[i], "MZ row " + std::to_string(i + 1));
    o.require(rows[i].az == az[i], "AZ row " + std::to_string(i + 1));
  }
  o.require(!rows[4].mz && !rows[4].az, "download MZ/AZ should be ongoing");
  const double tol = 0.005;
  o.require(near(*agg.am.mean, 22.80, tol), "mean AM " + num(*agg.am.mean));
  o.require(near(*agg.mz.mean, 19.25, tol), "mean MZ " + num(*agg.mz.mean));
  o.require(near(*agg.az.mean, 45.75, tol), "mean AZ " + num(*agg.az.mean));
  o.require(near(*agg.am.sd, 16.08, tol), "sd AM " + num(*agg.am.sd));
  o.require(near(*agg.mz.sd, 15.09, tol), "sd MZ " + num(*agg.mz.sd));
  o.require(near(*agg.az.sd, 30.63, tol), "sd AZ " + num(*agg.az.sd));
  o.require(near(*agg.up_share.mean, 61.24, tol), "up share " + num(*agg.up_share.mean));
  o.require(near(*agg.down_share.mean, 38.76, tol), "down share " + num(*agg.down_share.mean));
  o.require(best < 1.0, "runtime " + num(best, 3) + " ms");
  o.note("means " + num(*agg.am.mean, 2) + "/" + num(*agg.mz.mean, 2) + "/" + num(*agg.az.mean, 2) + ", sds " +
         num(*agg.am.sd, 2) + "/" + num(*agg.mz.sd, 2) + "/" + num(*agg.az.sd, 2) + ", shares " +
         num(*agg.up_share.mean, 2) + "/" + num(*agg.down_share.mean, 2) + ", " + num(best, 4) + " ms");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const std::vector<CycleEvents> established{ev("8-track", 1965, 1978, 1982), ev("cassette", 1964, 1990, 2008),
                                             ev("cd", 1983, 2000, 2018)};
  std::vector<double> dps;
  for (const auto& e : established) dps.push_back(disruption_period(e));
  o.require(dps == std::vector<double>{4, 18, 18}, "DPs");
  const std::vector<double> shares{42.80, 41.00, 45.20, 46.60, 49.98};
  const auto s = describe(shares);
  o.require(near(*s.mean, 45.12, 0.005), "share mean " + num(*s.mean));
  o.require(near(*s.sd, 3.47, 0.005), "share sd " + num(*s.sd));
  const auto d = describe(dps);
  o.note("DPs 4/18/18, share mean " + num(*s.mean, 3) + " sd " + num(*s.sd, 3) + ", DP sd " + num(*d.sd, 2));
  return o;
}

Outcome criterion3() {
  Outcome o;
  SubstitutionFit t1, t2;
  const double ms = elapsed_ms([&] {
    const auto cfg = study_config();
    const auto ds = cli::load_real(cfg);
    t1 = fit_substitution(ds.series("cd"), ds.series("cassette"), YearInterval{1984, 2008});
    t2 = fit_substitution(ds.series("streaming"), ds.series("cd"), YearInterval{2004, 2018});
  });
  o.require(t1.b_exponent >= 1.8 && t1.b_exponent <= 2.4,
            "CD vs cassette B " + num(t1.b_exponent, 3) + " outside [1.8, 2.4]");
  o.require(t1.regime == Regime::Acceleration, "CD vs cassette regime " + std::string(to_string(t1.regime)));
  o.require(t2.b_exponent >= -1.45 && t2.b_exponent <= -1.10, "streaming vs CD B " + num(t2.b_exponent, 3));
  o.require(t2.fit.r2_adj >= 0.90, "streaming vs CD r2_adj " + num(t2.fit.r2_adj, 3));
  o.require(std::fabs(t2.fit.f_stat - 240.01) <= 0.2 * 240.01, "streaming vs CD F " + num(t2.fit.f_stat, 2));
  o.require(ms < 1000.0, "runtime " + num(ms, 1) + " ms");
  o.note("streaming vs CD B " + num(t2.b_exponent, 3) + " r2_adj " + num(t2.fit.r2_adj, 3) + " F " +
         num(t2.fit.f_stat, 2) + "; CD vs cassette B " + num(t1.b_exponent, 3) + " r2_adj " +
         num(t1.fit.r2_adj, 3) + "; " + num(ms, 1) + " ms");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto cfg = study_config();
  const auto ds = cli::load_cycle_basis(cfg);
  struct Target {
    const char* old_name;
    const char* new_name;
    int year;
    double share;
  };
  for (const Target& t : {Target{"8-track", "cassette", 1980, 42.80}, Target{"cassette", "cd", 1991, 41.00},
                          Target{"download", "streaming", 2015, 49.98}}) {
    const auto c = crossover_year(ds.series(t.old_name), ds.series(t.new_name));
    const std::string pair = std::string(t.old_name) + "/" + t.new_name;
    if (!c) {
      o.require(false, pair + " no crossover");
      continue;
    }
    o.require(c->year == t.year, pair + " year " + std::to_string(c->year));
    o.require(near(c->established_share, t.share, 1.5),
              pair + " share " + num(c->established_share, 2) + " vs " + num(t.share, 2) + " +/- 1.5");
    o.note(pair + " " + std::to_string(c->year) + " " + num(c->established_share, 2));
  }
  const auto report = cli::build_study_report(cfg);
  if (!report.table3_dp.mean) {
    o.require(false, "no computable DP");
  } else {
    o.require(near(*report.table3_dp.mean, 13.0, 1.0), "mean DP " + num(*report.table3_dp.mean, 2));
    o.note("mean DP " + num(*report.table3_dp.mean, 2) + " over " + std::to_string(report.table3_dp.n));
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> len(3, 50);
  std::uniform_real_distribution<double> coef(-10, 10), xd(-100, 100), noise(-5, 5);
  double worst_coef = 0, worst_r2 = 0, worst_f = 0;
  std::vector<std::vector<double>> xs(200), ys(200);
  for (int i = 0; i < 200; ++i) {
    const int n = len(rng);
    const double a = coef(rng), b = coef(rng);
    for (int j = 0; j < n; ++j) {
      xs[i].push_back(xd(rng));
      ys[i].push_back(a + b * xs[i].back() + noise(rng));
    }
  }
  std::vector<OlsFit> fits(200);
  const double ms = elapsed_ms([&] {
    for (int i = 0; i < 200; ++i) fits[i] = ols_simple(xs[i], ys[i]);
  });
  for (int i = 0; i < 200; ++i) {
    const auto want = oracle::normal_equations(xs[i], ys[i]);
    const auto& f = fits[i];
    const auto rel = [](double g, double w) { return std::fabs(g - w) / std::max(std::fabs(w), 1e-300); };
    worst_coef = std::max({worst_coef, rel(f.intercept, want.intercept), rel(f.slope, want.slope)});
    worst_r2 = std::max(worst_r2, std::fabs(f.r2 - want.r2));
    worst_f = std::max(worst_f, rel(f.f_stat, f.t_slope * f.t_slope));
  }
  o.require(worst_coef < 1e-10, "coef rel err " + std::to_string(worst_coef));
  o.require(worst_r2 < 1e-9, "r2 err " + std::to_string(worst_r2));
  o.require(worst_f < 1e-9, "F vs t^2 " + std::to_string(worst_f));
  o.require(ms < 1000.0, "runtime " + num(ms, 1) + " ms");
  char buf[160];
  std::snprintf(buf, sizeof buf, "max coef rel %.2e, r2 %.2e, F/t^2 %.2e, %.2f ms", worst_coef, worst_r2, worst_f, ms);
  o.note(buf);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> k(1, 1e4), a(-10, 30), b(0.02, 2.0);
  double worst = 0;
  const double ms = elapsed_ms([&] {
    for (int i = 0; i < 1000; ++i) {
      const LogisticParams p1{k(rng), a(rng), b(rng)}, p2{k(rng), a(rng), b(rng)};
      const auto r = odds_relation(p1, p2);
      const double log_c1 = r.log_c1;
      for (int t = 0; t <= 40; ++t) {
        const double lhs = logistic_log_odds(p1, t);
        const double rhs = log_c1 + r.exponent * logistic_log_odds(p2, t);
        worst = std::max(worst, std::fabs(lhs - rhs));
      }
    }
  });
  o.require(worst < 1e-9, "residual " + std::to_string(worst));
  o.require(ms < 1000.0, "runtime " + num(ms, 1) + " ms");
  char buf[96];
  std::snprintf(buf, sizeof buf, "max residual %.2e over 41000 points, %.2f ms", worst, ms);
  o.note(buf);
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::string summary;
  const double ms = elapsed_ms([&] {
    for (double ratio : {0.5, 1.0, 2.0, 4.0}) {
      const double b1 = 0.4, b2 = ratio * b1;
      const SyntheticScenario s{{1000, 40 * b1, b1}, {2000, 50 * b2, b2}, {0, 80}, 0.0, 42};
      const auto early = recovery_experiment(s, EarlyWindow{0.1});
      const auto wide = recovery_experiment(s, YearInterval{0, 80});
      o.require(early.abs_gap < 0.05, "ratio " + num(ratio, 1) + " gap " + num(early.abs_gap));
      o.require(wide.abs_gap > early.abs_gap, "ratio " + num(ratio, 1) + " wide gap not larger");
      summary += (summary.empty() ? "" : ", ") + num(ratio, 1) + ": " + num(early.abs_gap) + " -> " +
                 num(wide.abs_gap);
    }
  });
  o.require(ms < 1000.0, "runtime " + num(ms, 1) + " ms");
  o.note("gaps early -> wide " + summary + "; " + num(ms, 1) + " ms");
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst = 0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 3.8, 10.0})
    for (int df : {1, 5, 13, 23, 100})
      worst = std::max(worst, std::fabs(t_p_value(t, df) - oracle::t_two_sided_quadrature(t, df)));
  const double cauchy = std::fabs(t_p_value(1.0, 1) - 0.5);
  o.require(worst < 1e-8, "max abs err " + std::to_string(worst));
  o.require(cauchy < 1e-10, "Cauchy err " + std::to_string(cauchy));
  char buf[96];
  std::snprintf(buf, sizeof buf, "max abs err %.2e, Cauchy err %.2e", worst, cauchy);
  o.note(buf);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  bool ok = true;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto other = b / fs::relative(e.path(), a);
    ok = ok && fs::exists(other) && slurp(e.path()) == slurp(other);
  }
  return ok;
}

Outcome criterion9() {
  Outcome o;
  const auto root = fs::temp_directory_path() / "techcycle_acceptance";
  fs::remove_all(root);
  std::size_t files = 0;
  for (auto fmt : {cli::OutputFormat::Text, cli::OutputFormat::Csv, cli::OutputFormat::Json}) {
    std::ostringstream out1, out2;
    auto cfg = study_config();
    cfg.format = fmt;
    cfg.out_dir = (root / "report1").string();
    cli::cmd_report(cfg, out1);
    cfg.out_dir = (root / "report2").string();
    cli::cmd_report(cfg, out2);
  }
  o.require(same_tree(root / "report1", root / "report2", files), "report files differ");
  const auto sc = parse_scenario(KeyValueConfig::load(fixtures::data_file("scenarios/noisy.cfg")));
  std::string sim_out[2];
  for (int i = 0; i < 2; ++i) {
    auto cfg = cli::default_run_config();
    cfg.out_dir = (root / ("sim" + std::to_string(i + 1))).string();
    std::ostringstream out;
    cli::cmd_simulate(cfg, sc, out);
  }
  o.require(same_tree(root / "sim1", root / "sim2", files), "simulate files differ");
  o.note(std::to_string(files) + " files compared byte for byte");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"cycle table arithmetic", criterion1},     {"disruption table arithmetic", criterion2},
      {"regression targets", criterion3},     {"crossover targets", criterion4},
      {"OLS oracle equivalence", criterion5}, {"log-odds identity", criterion6},
      {"exponent recovery", criterion7},      {"t-distribution accuracy", criterion8},
      {"determinism", criterion9}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
