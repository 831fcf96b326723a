#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "techcycle/config.hpp"

#ifndef TECHCYCLE_DEFAULT_DATA_DIR
#define TECHCYCLE_DEFAULT_DATA_DIR "data"
#endif

namespace techcycle::cli {

namespace fs = std::filesystem;

int exit_code_for(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::InsufficientData:
    case ErrorKind::DegenerateRegressor:
    case ErrorKind::Window:
      return kExitInsufficientData;
    default:
      return kExitInputError;
  }
}

std::string default_data_dir() {
  if (const char* env = std::getenv("TECHCYCLE_DATA_DIR"); env && *env) return env;
  return TECHCYCLE_DEFAULT_DATA_DIR;
}

RunConfig default_run_config() {
  RunConfig cfg;
  const fs::path root = default_data_dir();
  cfg.data_path = (root / "riaa_us_revenue.csv").string();
  cfg.cpi_path = (root / "cpi.csv").string();
  cfg.groups_path = (root / "groups.cfg").string();
  return cfg;
}

namespace {

std::optional<YearInterval> parse_window_spec(const std::string& s) {
  if (trim(s) == "auto") return std::nullopt;
  return parse_year_interval(s);
}

double parse_number(const KeyValueConfig& kv, const std::string& key, const std::string& v) {
  const auto d = parse_double(v);
  if (!d) throw Error(ErrorKind::Parse, kv.source() + ": '" + key + "' is not a number");
  return *d;
}

int parse_year(const KeyValueConfig& kv, const std::string& key, const std::string& v) {
  const auto i = parse_int(v);
  if (!i) throw Error(ErrorKind::Parse, kv.source() + ": '" + key + "' is not an integer");
  return static_cast<int>(*i);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::string p4(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

std::string regime_note(Regime r) {
  switch (r) {
    case Regime::LowGrowth: return "LowGrowth (0 <= B < 1)";
    case Regime::Proportional: return "Proportional (B = 1 within tolerance)";
    case Regime::Acceleration: return "Acceleration (B > 1)";
    case Regime::NegativeCoupling: return "NegativeCoupling (B < 0)";
  }
  return "?";
}

Cell ongoing_or(std::optional<int> v) {
  if (!v) return std::string("*");
  return static_cast<std::int64_t>(*v);
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  const auto kv = KeyValueConfig::load(path);
  const fs::path dir = fs::path(path).parent_path();
  const auto resolve = [&](const std::string& p) {
    const fs::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };
  for (const auto& [key, value] : kv.entries()) {
    if (key == "data") cfg.data_path = resolve(value);
    else if (key == "cpi") cfg.cpi_path = value.empty() ? std::string() : resolve(value);
    else if (key == "groups") cfg.groups_path = resolve(value);
    else if (key == "base_year") cfg.base_year = parse_year(kv, key, value);
    else if (key == "cycle_basis") cfg.cycle_basis = parse_basis(value);
    else if (key == "end_threshold") cfg.end_threshold_rel = parse_number(kv, key, value);
    else if (key == "ongoing_floor") cfg.ongoing_floor_rel = parse_number(kv, key, value);
    else if (key == "tolerance") cfg.regime_tolerance = parse_number(kv, key, value);
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "out") cfg.out_dir = resolve(value);
    else if (key == "table1.old") cfg.table1.old_name = value;
    else if (key == "table1.new") cfg.table1.new_name = value;
    else if (key == "table1.window") cfg.table1.window = parse_window_spec(value);
    else if (key == "table2.old") cfg.table2.old_name = value;
    else if (key == "table2.new") cfg.table2.new_name = value;
    else if (key == "table2.window") cfg.table2.window = parse_window_spec(value);
    else if (key == "table3.pairs") {
      cfg.table3_pairs.clear();
      for (const auto& item : split_list(value, ';')) {
        const auto gt = item.find('>');
        if (gt == std::string::npos)
          throw Error(ErrorKind::Parse, kv.source() + ": table3.pairs entries must be 'old > new'");
        cfg.table3_pairs.emplace_back(std::string(trim(item.substr(0, gt))), std::string(trim(item.substr(gt + 1))));
      }
    } else if (key == "table4.technologies") {
      cfg.table4_technologies = split_list(value, ';');
    } else if (key.starts_with("a_override.")) {
      cfg.a_overrides[key.substr(11)] = parse_year(kv, key, value);
    } else {
      throw Error(ErrorKind::Parse, kv.source() + ": unknown key '" + key + "'");
    }
  }
}

Dataset load_real(const RunConfig& cfg) { return load_dataset(cfg.paths(), cfg.base_year, Basis::Real); }

Dataset load_cycle_basis(const RunConfig& cfg) { return load_dataset(cfg.paths(), cfg.base_year, cfg.cycle_basis); }

EventConfig event_config(const RunConfig& cfg, const std::string& technology) {
  EventConfig ec;
  ec.end_threshold_rel = cfg.end_threshold_rel;
  ec.ongoing_floor_rel = cfg.ongoing_floor_rel;
  if (const auto it = cfg.a_overrides.find(technology); it != cfg.a_overrides.end()) ec.a_override = it->second;
  return ec;
}

Table fit_table(const SubstitutionFit& fit, const PairSpec& pair) {
  Table t;
  t.title = "log " + pair.new_name + " = log A + B log " + pair.old_name;
  t.columns = {"established", "disruptive", "window_first", "window_last", "n",
               "log_a", "se_log_a", "t_log_a", "p_log_a",
               "b", "se_b", "t_b", "p_b",
               "r2", "r2_adj", "se_estimate", "f", "p_f", "regime"};
  const auto& f = fit.fit;
  t.add_row({pair.old_name, pair.new_name, std::int64_t{fit.window.first}, std::int64_t{fit.window.last},
             std::int64_t{f.n}, f.intercept, f.se_intercept, f.t_intercept, f.p_intercept, f.slope, f.se_slope,
             f.t_slope, f.p_slope, f.r2, f.r2_adj, f.se_estimate, f.f_stat, f.p_f,
             std::string(to_string(fit.regime))});
  return t;
}

std::string render_fit_text(const SubstitutionFit& fit, const PairSpec& pair) {
  const auto& f = fit.fit;
  Table t;
  t.title = "log " + pair.new_name + " = log A + B log " + pair.old_name + "   (window " + to_string(fit.window) +
            ", n = " + std::to_string(f.n) + ")";
  t.columns = {"term", "estimate", "se", "t", "p", ""};
  t.add_row({std::string("log A"), f.intercept, f.se_intercept, f.t_intercept, p4(f.p_intercept),
             std::string(significance_stars(f.p_intercept))});
  t.add_row({std::string("B"), f.slope, f.se_slope, f.t_slope, p4(f.p_slope),
             std::string(significance_stars(f.p_slope))});
  t.notes.push_back("R2 = " + fixed2(f.r2) + "   R2 adj = " + fixed2(f.r2_adj) + "   SE of estimate = " +
                    fixed2(f.se_estimate) + "   F = " + fixed2(f.f_stat) + " (p = " + p4(f.p_f) + ")");
  t.notes.push_back("regime: " + regime_note(fit.regime));
  t.notes.push_back("*** p <= 0.01, ** p <= 0.05, * p <= 0.10");
  return render_text(t);
}

StudyReport build_study_report(const RunConfig& cfg) {
  StudyReport r;
  const Dataset real = load_real(cfg);
  const Dataset cyc = load_cycle_basis(cfg);

  r.table1_pair = cfg.table1;
  r.table1 = fit_substitution(real.series(cfg.table1.new_name), real.series(cfg.table1.old_name), cfg.table1.window,
                              cfg.regime_tolerance);
  r.table2_pair = cfg.table2;
  r.table2 = fit_substitution(real.series(cfg.table2.new_name), real.series(cfg.table2.old_name), cfg.table2.window,
                              cfg.regime_tolerance);

  auto pairs = cfg.table3_pairs;
  if (pairs.empty()) {
    const auto names = cyc.technology_names();
    for (std::size_t i = 0; i + 1 < names.size(); ++i) pairs.emplace_back(names[i], names[i + 1]);
  }
  std::vector<double> shares;
  std::vector<double> dps;
  std::set<std::string> dp_seen;
  for (const auto& [old_name, new_name] : pairs) {
    Table3Row row;
    row.established = old_name;
    row.disruptive = new_name;
    const auto old_series = cyc.series(old_name);
    const auto new_series = cyc.series(new_name);
    row.events = detect_events(old_series, event_config(cfg, old_name));
    row.introduced = row.events.a_year;
    row.crossover = crossover_year(old_series, new_series);
    if (row.crossover) {
      shares.push_back(row.crossover->established_share);
      const double total = cyc.market_total(row.crossover->year);
      if (total > 0.0) row.market_share = 100.0 * *old_series.value(row.crossover->year) / total;
    }
    if (row.events.m_year && row.events.z_year) {
      row.dp = disruption_period(row.events);
      if (dp_seen.insert(old_name).second) dps.push_back(*row.dp);
    }
    r.table3.push_back(std::move(row));
  }
  r.table3_share = describe(shares);
  r.table3_dp = describe(dps);

  auto techs = cfg.table4_technologies;
  if (techs.empty()) techs = cyc.technology_names();
  for (const auto& name : techs) r.table4.push_back(cycle_metrics(detect_events(cyc.series(name), event_config(cfg, name))));
  r.table4_aggregate = aggregate_cycles(r.table4);

  for (const auto& name : real.technology_names()) r.plots.push_back(real.series(name));
  return r;
}

Table table3_table(const StudyReport& r) {
  Table t;
  t.title = "Disruption period of established technologies";
  t.columns = {"established", "introduced", "disruptive", "crossover_year", "established_share_pct",
               "established_market_share_pct", "peak_m", "end_z", "dp_years"};
  for (const auto& row : r.table3) {
    t.add_row({row.established, std::int64_t{row.introduced}, row.disruptive,
               row.crossover ? Cell(std::int64_t{row.crossover->year}) : Cell(std::string("none")),
               row.crossover ? Cell(row.crossover->established_share) : Cell{}, cell(row.market_share),
               ongoing_or(row.events.m_year), ongoing_or(row.events.z_year), cell(row.dp)});
  }
  t.add_row({std::string("mean"), Cell{}, Cell{}, Cell{}, cell(r.table3_share.mean), Cell{}, Cell{}, Cell{},
             cell(r.table3_dp.mean)});
  t.add_row({std::string("sd"), Cell{}, Cell{}, Cell{}, cell(r.table3_share.sd), Cell{}, Cell{}, Cell{},
             cell(r.table3_dp.sd)});
  if (r.table3_dp.mean) {
    t.notes.push_back("mean disruption period: " + fixed2(*r.table3_dp.mean) + " years over " +
                      std::to_string(r.table3_dp.n) + " established technologies" +
                      (r.table3_dp.sd ? " (SD " + fixed2(*r.table3_dp.sd) + ")" : std::string()));
  }
  t.notes.push_back("established_share_pct: established / (established + disruptive) in the crossover year");
  t.notes.push_back("established_market_share_pct: established / all formats in the crossover year");
  return t;
}

Table table4_table(std::span<const CycleSummary> rows, const CycleAggregate& agg) {
  Table t;
  t.title = "Technological cycles";
  t.columns = {"technology", "a_begin", "m_peak", "z_end", "am_up_years", "mz_down_years", "az_cycle_years",
               "am_az_pct", "mz_az_pct", "censored"};
  for (const auto& s : rows) {
    t.add_row({s.events.technology, std::int64_t{s.events.a_year}, ongoing_or(s.events.m_year),
               ongoing_or(s.events.z_year), cell(s.am), cell(s.mz), cell(s.az), cell(s.up_share), cell(s.down_share),
               std::string(s.events.censored ? "yes" : "no")});
  }
  t.add_row({std::string("mean"), Cell{}, Cell{}, Cell{}, cell(agg.am.mean), cell(agg.mz.mean), cell(agg.az.mean),
             cell(agg.up_share.mean), cell(agg.down_share.mean), Cell{}});
  t.add_row({std::string("sd"), Cell{}, Cell{}, Cell{}, cell(agg.am.sd), cell(agg.mz.sd), cell(agg.az.sd),
             cell(agg.up_share.sd), cell(agg.down_share.sd), Cell{}});
  if (agg.up_share.mean && agg.down_share.mean) {
    t.notes.push_back("asymmetry: up wave " + fixed2(*agg.up_share.mean) + "% / down wave " +
                      fixed2(*agg.down_share.mean) + "% of the cycle (" + std::to_string(agg.up_share.n) +
                      " completed cycles)");
  }
  t.notes.push_back("* = ongoing");
  return t;
}

Table recovery_table(const RecoveryReport& r) {
  Table t;
  t.title = "Allometric exponent recovery";
  t.columns = {"b_theoretical", "b_fitted", "abs_gap", "window_first", "window_last", "n", "saturation_level"};
  t.add_row({r.b_theoretical, r.b_fitted, r.abs_gap, std::int64_t{r.window_used.first},
             std::int64_t{r.window_used.last}, std::int64_t{r.fit.fit.n}, r.saturation_level});
  return t;
}

int cmd_fit(const RunConfig& cfg, const PairSpec& pair, std::ostream& out) {
  const Dataset ds = load_real(cfg);
  const auto fit = fit_substitution(ds.series(pair.new_name), ds.series(pair.old_name), pair.window,
                                    cfg.regime_tolerance);
  if (cfg.format == OutputFormat::Text) out << render_fit_text(fit, pair);
  else out << render(fit_table(fit, pair), cfg.format);
  return kExitOk;
}

int cmd_cycles(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = load_cycle_basis(cfg);
  auto techs = cfg.table4_technologies;
  if (techs.empty()) techs = ds.technology_names();
  std::vector<CycleSummary> rows;
  for (const auto& name : techs) rows.push_back(cycle_metrics(detect_events(ds.series(name), event_config(cfg, name))));
  out << render(table4_table(rows, aggregate_cycles(rows)), cfg.format);
  return kExitOk;
}

int cmd_crossover(const RunConfig& cfg, const std::string& old_name, const std::string& new_name, std::ostream& out) {
  const Dataset ds = load_cycle_basis(cfg);
  const auto old_series = ds.series(old_name);
  const auto new_series = ds.series(new_name);
  const auto cross = crossover_year(old_series, new_series);
  std::optional<int> dp;
  CycleEvents ev = detect_events(old_series, event_config(cfg, old_name));
  if (ev.m_year && ev.z_year) dp = disruption_period(ev);

  Table t;
  t.title = "Crossover of " + new_name + " over " + old_name;
  t.columns = {"established", "disruptive", "crossover_year", "established_share_pct", "dp_years"};
  t.add_row({old_name, new_name, cross ? Cell(std::int64_t{cross->year}) : Cell(std::string("none")),
             cross ? Cell(cross->established_share) : Cell{}, cell(dp)});
  if (!cross) t.notes.push_back("no crossover in data");
  if (cfg.format == OutputFormat::Text && !cross) {
    out << "no crossover in data\n";
    return kExitOk;
  }
  out << render(t, cfg.format);
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const ScenarioFile& scenario, std::ostream& out) {
  const auto report = recovery_experiment(scenario.scenario, scenario.policy);
  const auto [old_series, new_series] = generate_scenario(scenario.scenario);

  std::string csv = "year,old,new\n";
  for (const auto& [year, v] : old_series.points())
    csv += std::to_string(year) + "," + exact_number(v) + "," + exact_number(*new_series.value(year)) + "\n";
  const fs::path series_path = fs::path(cfg.out_dir) / "simulated_series.csv";
  write_file(series_path, csv);

  Table t = recovery_table(report);
  t.notes.push_back("series written to " + series_path.string());
  out << render(t, cfg.format);
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  const StudyReport r = build_study_report(cfg);
  const fs::path dir = cfg.out_dir;
  const std::string ext(extension(cfg.format));

  const auto fit_render = [&](const SubstitutionFit& f, const PairSpec& p) {
    return cfg.format == OutputFormat::Text ? render_fit_text(f, p) : render(fit_table(f, p), cfg.format);
  };
  std::vector<fs::path> written;
  const auto emit = [&](const fs::path& p, const std::string& content) {
    write_file(p, content);
    written.push_back(p);
  };
  emit(dir / ("table1." + ext), fit_render(r.table1, r.table1_pair));
  emit(dir / ("table2." + ext), fit_render(r.table2, r.table2_pair));
  emit(dir / ("table3." + ext), render(table3_table(r), cfg.format));
  emit(dir / ("table4." + ext), render(table4_table(r.table4, r.table4_aggregate), cfg.format));
  for (const auto& s : r.plots) {
    std::string csv = "year,revenue_musd\n";
    for (const auto& [year, v] : s.points()) csv += std::to_string(year) + "," + exact_number(v) + "\n";
    emit(dir / "plots" / (s.technology() + ".csv"), csv);
  }
  for (const auto& p : written) out << "wrote " << p.string() << "\n";
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = load_real(cfg);
  Table t;
  t.title = "Dataset " + cfg.data_path;
  t.columns = {"technology", "formats", "first_year", "last_year", "points", "gaps", "peak_year", "peak_musd"};
  for (const auto& g : ds.groups()) {
    const auto s = ds.series(g.name);
    if (!s.has_positive()) throw Error(ErrorKind::Validation, g.name + ": no positive revenue");
    int peak_year = s.first_year();
    double peak = -1.0;
    for (const auto& [y, v] : s.points())
      if (v > peak) {
        peak = v;
        peak_year = y;
      }
    t.add_row({g.name, static_cast<std::int64_t>(g.formats.size()), std::int64_t{s.first_year()},
               std::int64_t{s.last_year()}, static_cast<std::int64_t>(s.size()),
               static_cast<std::int64_t>(s.gaps().size()), std::int64_t{peak_year}, peak});
  }
  std::set<std::string> grouped;
  for (const auto& g : ds.groups()) grouped.insert(g.formats.begin(), g.formats.end());
  std::set<std::string> ungrouped;
  for (const auto& rec : ds.records())
    if (!grouped.contains(rec.format)) ungrouped.insert(rec.format);
  t.notes.push_back(std::to_string(ds.records().size()) + " records; values in " +
                    std::to_string(cfg.base_year) + " dollars");
  if (!ungrouped.empty()) {
    std::string list;
    for (const auto& f : ungrouped) list += (list.empty() ? "" : ", ") + f;
    t.notes.push_back("formats outside any group: " + list);
  }
  out << render(t, cfg.format);
  return kExitOk;
}

}  // namespace techcycle::cli
