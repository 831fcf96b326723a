#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "table.hpp"
#include "techcycle/cycle.hpp"
#include "techcycle/error.hpp"
#include "techcycle/growth_models.hpp"
#include "techcycle/market_data.hpp"
#include "techcycle/synthlab.hpp"

namespace techcycle::cli {

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitInsufficientData = 3 };

int exit_code_for(const Error& e) noexcept;

struct PairSpec {
  std::string old_name;
  std::string new_name;
  std::optional<YearInterval> window;  // empty = auto
};

struct RunConfig {
  std::string data_path;
  std::string cpi_path;
  std::string groups_path;
  int base_year = kDefaultBaseYear;
  double end_threshold_rel = 0.01;
  double ongoing_floor_rel = 0.0;
  double regime_tolerance = kDefaultRegimeTolerance;
  Basis cycle_basis = Basis::Real;
  OutputFormat format = OutputFormat::Text;
  std::string out_dir = ".";
  std::map<std::string, int> a_overrides;

  PairSpec table1{"cassette", "cd", std::nullopt};
  PairSpec table2{"cd", "streaming", std::nullopt};
  std::vector<std::pair<std::string, std::string>> table3_pairs;  // empty = consecutive groups
  std::vector<std::string> table4_technologies;                   // empty = every group

  DatasetPaths paths() const { return {data_path, cpi_path, groups_path}; }
};

/// Paths under $TECHCYCLE_DATA_DIR, falling back to the bundled data directory.
RunConfig default_run_config();
std::string default_data_dir();

/// Applies a key-value run file (see data/riaa_study.cfg). Relative paths resolve
/// against the file's directory.
void apply_config_file(RunConfig& cfg, const std::string& path);

Dataset load_real(const RunConfig& cfg);
Dataset load_cycle_basis(const RunConfig& cfg);

EventConfig event_config(const RunConfig& cfg, const std::string& technology);

Table fit_table(const SubstitutionFit& fit, const PairSpec& pair);
std::string render_fit_text(const SubstitutionFit& fit, const PairSpec& pair);

struct Table3Row {
  std::string established;
  std::string disruptive;
  int introduced = 0;
  std::optional<CrossoverResult> crossover;
  std::optional<double> market_share;  // established share of all formats that year, percent
  CycleEvents events;
  std::optional<int> dp;
};

struct StudyReport {
  PairSpec table1_pair;
  SubstitutionFit table1;
  PairSpec table2_pair;
  SubstitutionFit table2;
  std::vector<Table3Row> table3;
  ColumnStats table3_share;
  ColumnStats table3_dp;
  std::vector<CycleSummary> table4;
  CycleAggregate table4_aggregate;
  std::vector<RevenueSeries> plots;
};

StudyReport build_study_report(const RunConfig& cfg);

Table table3_table(const StudyReport& r);
Table table4_table(std::span<const CycleSummary> rows, const CycleAggregate& agg);
Table recovery_table(const RecoveryReport& r);

// Each command returns its exit status; library errors propagate as Error.
int cmd_fit(const RunConfig& cfg, const PairSpec& pair, std::ostream& out);
int cmd_cycles(const RunConfig& cfg, std::ostream& out);
int cmd_crossover(const RunConfig& cfg, const std::string& old_name, const std::string& new_name, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, const ScenarioFile& scenario, std::ostream& out);
int cmd_report(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

/// Parses argv and dispatches; all errors become an exit code and a message
/// on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace techcycle::cli
