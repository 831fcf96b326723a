#include <CLI11.hpp>

#include "commands.hpp"
#include "techcycle/config.hpp"

namespace techcycle::cli {

namespace {

struct Flags {
  std::string config;
  std::string data, cpi, groups;
  std::optional<int> base_year;
  std::string old_name, new_name;
  std::string window;
  std::optional<double> end_threshold;
  std::optional<double> tolerance;
  std::string format;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::optional<double> fraction;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "Run file with data paths and table settings");
  app->add_option("--data", f.data, "Revenue CSV");
  app->add_option("--cpi", f.cpi, "CPI CSV (year,index)");
  app->add_option("--groups", f.groups, "Technology groups file");
  app->add_option("--base-year", f.base_year, "Dollar base year");
  app->add_option("--format", f.format, "text, csv or json");
  app->add_option("--out", f.out, "Output directory");
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg = default_run_config();
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  if (!f.data.empty()) cfg.data_path = f.data;
  if (!f.cpi.empty()) cfg.cpi_path = f.cpi;
  if (!f.groups.empty()) cfg.groups_path = f.groups;
  if (f.base_year) cfg.base_year = *f.base_year;
  if (f.end_threshold) cfg.end_threshold_rel = *f.end_threshold;
  if (f.tolerance) cfg.regime_tolerance = *f.tolerance;
  if (!f.format.empty()) cfg.format = parse_format(f.format);
  if (!f.out.empty()) cfg.out_dir = f.out;
  return cfg;
}

WindowPolicy parse_policy(const std::string& s, std::optional<double> fraction, WindowPolicy current) {
  if (s.empty()) {
    if (fraction) {
      if (auto* e = std::get_if<EarlyWindow>(&current)) e->fraction = *fraction;
    }
    return current;
  }
  if (s == "early") return EarlyWindow{fraction.value_or(EarlyWindow{}.fraction)};
  return parse_year_interval(s);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Technology substitution and cycle analysis of recorded-music revenue"};
  app.require_subcommand(1);
  Flags f;

  auto* fit = app.add_subcommand("fit", "Fit log new = log A + B log old over a window");
  add_common(fit, f);
  fit->add_option("--old", f.old_name, "Established technology")->required();
  fit->add_option("--new", f.new_name, "Disruptive technology")->required();
  fit->add_option("--window", f.window, "Y1:Y2 or auto");
  fit->add_option("--tolerance", f.tolerance, "Proportional-regime tolerance on |B - 1|");

  auto* cycles = app.add_subcommand("cycles", "Begin, peak and end years of each technology");
  add_common(cycles, f);
  cycles->add_option("--end-threshold", f.end_threshold, "End threshold relative to peak");

  auto* cross = app.add_subcommand("crossover", "First year the disruptive technology outsells the established one");
  add_common(cross, f);
  cross->add_option("--old", f.old_name, "Established technology")->required();
  cross->add_option("--new", f.new_name, "Disruptive technology")->required();
  cross->add_option("--end-threshold", f.end_threshold, "End threshold relative to peak");

  auto* sim = app.add_subcommand("simulate", "Recover B from two synthetic logistic curves");
  sim->add_option("--scenario", f.scenario, "Scenario file")->required();
  sim->add_option("--seed", f.seed, "Override the scenario seed");
  sim->add_option("--window", f.window, "early or Y1:Y2");
  sim->add_option("--fraction", f.fraction, "Saturation fraction for the early window");
  sim->add_option("--format", f.format, "text, csv or json");
  sim->add_option("--out", f.out, "Output directory");

  auto* report = app.add_subcommand("report", "Write every table and per-technology plot data");
  add_common(report, f);

  auto* validate = app.add_subcommand("validate", "Check the dataset and summarise each technology");
  add_common(validate, f);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands())
      if (sub->parsed()) err << sub->help();
    return kExitInputError;
  }

  try {
    RunConfig cfg = resolve(f);
    if (fit->parsed()) {
      PairSpec pair{f.old_name, f.new_name, std::nullopt};
      if (!f.window.empty() && f.window != "auto") pair.window = parse_year_interval(f.window);
      return cmd_fit(cfg, pair, out);
    }
    if (cycles->parsed()) return cmd_cycles(cfg, out);
    if (cross->parsed()) return cmd_crossover(cfg, f.old_name, f.new_name, out);
    if (sim->parsed()) {
      ScenarioFile sc = parse_scenario(KeyValueConfig::load(f.scenario));
      if (f.seed) sc.scenario.seed = *f.seed;
      sc.policy = parse_policy(f.window, f.fraction, sc.policy);
      return cmd_simulate(cfg, sc, out);
    }
    if (report->parsed()) return cmd_report(cfg, out);
    if (validate->parsed()) return cmd_validate(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace techcycle::cli
