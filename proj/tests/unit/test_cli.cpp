#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace techcycle;
using namespace techcycle::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "techcycle");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string study_cfg() { return fixtures::data_file("riaa_study.cfg"); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("techcycle_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("fit prints coefficients and a verdict") {
  const auto r = invoke({"fit", "--config", study_cfg(), "--old", "cd", "--new", "streaming", "--window", "2004:2018"});
  CHECK(r.code == 0);
  CHECK(r.out.find("NegativeCoupling") != std::string::npos);
  CHECK(r.out.find("***") != std::string::npos);
  CHECK(r.out.find("n = 14") != std::string::npos);
}

TEST_CASE("fit of a technology against itself is proportional") {
  const auto r = invoke({"fit", "--old", "cassette", "--new", "cassette", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["b"].get<double>() == doctest::Approx(1.0));
  CHECK(j["rows"][0]["regime"] == "Proportional");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"fit", "--old", "laserdisc", "--new", "cd"}).code == kExitInputError);
  CHECK(invoke({"fit", "--old", "cd"}).code == kExitInputError);
  CHECK(invoke({"nonsense"}).code == kExitInputError);
  CHECK(invoke({"fit", "--old", "cassette", "--new", "cd", "--window", "2008:1984"}).code == kExitInputError);
  CHECK(invoke({"fit", "--old", "8-track", "--new", "streaming"}).code == kExitInsufficientData);
  CHECK(invoke({"cycles", "--data", "/nonexistent.csv"}).code == kExitInputError);
  const auto bad = invoke({"fit", "--old", "laserdisc", "--new", "cd"});
  CHECK(bad.err.find("unknown technology") != std::string::npos);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("cycles footer matches a recomputation from the CSV rows") {
  const auto r = invoke({"cycles", "--config", study_cfg(), "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() >= 3);
  const auto& header = rows.front();
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  std::vector<std::vector<double>> cols(5);
  const std::vector<std::string> names{"am_up_years", "mz_down_years", "az_cycle_years", "am_az_pct", "mz_az_pct"};
  const std::vector<std::string>* mean_row = nullptr;
  const std::vector<std::string>* sd_row = nullptr;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "mean") mean_row = &rows[i];
    else if (rows[i][0] == "sd") sd_row = &rows[i];
    else
      for (std::size_t c = 0; c < names.size(); ++c) {
        const auto& v = rows[i][col(names[c])];
        if (!v.empty()) cols[c].push_back(std::stod(v));
      }
  }
  REQUIRE(mean_row);
  REQUIRE(sd_row);
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto want = oracle::two_pass(cols[c]);
    CHECK(std::stod((*mean_row)[col(names[c])]) == doctest::Approx(*want.mean).epsilon(1e-12));
    CHECK(std::stod((*sd_row)[col(names[c])]) == doctest::Approx(*want.sd).epsilon(1e-12));
  }
}

TEST_CASE("cycles on a single technology") {
  const auto dir = scratch("single");
  fs::create_directories(dir);
  std::ofstream(dir / "groups.cfg") << "cd = CD\n";
  const auto r = invoke({"cycles", "--groups", (dir / "groups.cfg").string(), "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"].size() == 3);
  CHECK(j["rows"][2]["am_up_years"].is_null());
}

TEST_CASE("text, CSV and JSON agree") {
  const auto csv = invoke({"cycles", "--config", study_cfg(), "--format", "csv"});
  const auto json = invoke({"cycles", "--config", study_cfg(), "--format", "json"});
  const auto rows = csv_rows(csv.out);
  const auto j = nlohmann::json::parse(json.out);
  REQUIRE(j["rows"].size() + 1 == rows.size());
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(j["rows"][i]["technology"] == rows[i + 1][0]);
    const auto& az = rows[i + 1][6];
    if (az.empty()) CHECK(j["rows"][i]["az_cycle_years"].is_null());
    else CHECK(j["rows"][i]["az_cycle_years"].get<double>() == std::stod(az));
  }
  const auto text = invoke({"cycles", "--config", study_cfg()});
  CHECK(text.out.find("asymmetry") != std::string::npos);
  CHECK(text.out.find("*") != std::string::npos);
}

TEST_CASE("crossover command") {
  const auto r = invoke({"crossover", "--config", study_cfg(), "--old", "cassette", "--new", "cd"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1991") != std::string::npos);
  const auto none = invoke({"crossover", "--old", "cd", "--new", "8-track"});
  CHECK(none.code == 0);
  CHECK(none.out.find("no crossover in data") != std::string::npos);
}

TEST_CASE("validate") {
  const auto r = invoke({"validate"});
  CHECK(r.code == 0);
  CHECK(r.out.find("streaming") != std::string::npos);
}

TEST_CASE("report is byte-identical across runs") {
  const auto a = scratch("report_a"), b = scratch("report_b");
  for (const auto& fmt : {"text", "csv", "json"}) {
    REQUIRE(invoke({"report", "--config", study_cfg(), "--format", fmt, "--out", a.string()}).code == 0);
    REQUIRE(invoke({"report", "--config", study_cfg(), "--format", fmt, "--out", b.string()}).code == 0);
  }
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = fs::relative(e.path(), a);
    CHECK(slurp(e.path()) == slurp(b / rel));
  }
  CHECK(files == 12 + 6);
  CHECK(slurp(a / "table3.txt").find("mean disruption period") != std::string::npos);
}

TEST_CASE("simulate writes reproducible series") {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  const auto sc = fixtures::data_file("scenarios/noisy.cfg");
  const auto ra = invoke({"simulate", "--scenario", sc, "--out", a.string()});
  const auto rb = invoke({"simulate", "--scenario", sc, "--out", b.string()});
  REQUIRE(ra.code == 0);
  CHECK(slurp(a / "simulated_series.csv") == slurp(b / "simulated_series.csv"));
  CHECK(slurp(a / "simulated_series.csv").starts_with("year,old,new\n"));
  const auto rc = invoke({"simulate", "--scenario", sc, "--seed", "43", "--out", b.string()});
  CHECK(rc.code == 0);
  CHECK(slurp(a / "simulated_series.csv") != slurp(b / "simulated_series.csv"));
  CHECK(invoke({"simulate", "--scenario", sc, "--window", "500:600", "--out", b.string()}).code ==
        kExitInsufficientData);
}
