#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "oracles.hpp"

namespace magsim::cli {
namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "magsim");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string data(const std::string& name) { return testing::data_path(name); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "magsim_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<std::string> rows(const std::string& csv) {
  std::vector<std::string> r;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') r.push_back(line);
  return r;
}

TEST(Cli, SimulateAbQuartet) {
  const std::string peaks = scratch("ab_peaks.json").string();
  const Result r = invoke({"simulate", data("ab.json"), "--broadening-hz", "0.5", "--peaks", peaks});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(rows(r.out)[0], "ppm,hz,intensity");
  std::ifstream in(peaks);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["peaks"].size(), 4u);
}

TEST(Cli, AllSolversAgreeOnAb) {
  const Result exact = invoke({"simulate", data("ab.json"), "--solver", "exact"});
  for (const char* solver : {"cluster", "symmetry"}) {
    const Result r = invoke({"simulate", data("ab.json"), "--solver", solver});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(rows(r.out).size(), rows(exact.out).size()) << solver;
  }
}

TEST(Cli, SampledRequiresSeed) {
  const Result r = invoke({"simulate", data("ab.json"), "--solver", "sampled"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("ERROR[1]: ", 0), 0u) << r.err;
  EXPECT_EQ(invoke({"simulate", data("ab.json"), "--solver", "sampled", "--seed", "3"}).status, 0);
}

TEST(Cli, ConvergeTable) {
  const Result r = invoke({"converge", data("diphosphane_22.json"), "--sizes", "2,4"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = rows(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "max_cluster_size,largest_cluster,l1_distance_to_previous");
  EXPECT_EQ(lines[1].rfind("2,2,", 0), 0u);
}

TEST(Cli, RpaGapZeroCouplingEqualsBare) {
  const Result r = invoke({"rpa-gap", data("zero_coupling_4orb.fcidump")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["gap_hartree"].get<double>(), j["bare_gap_hartree"].get<double>(), 1e-12);
  EXPECT_EQ(j["n_modes"].get<int>(), 1);
}

TEST(Cli, RpaGapToyReportsOracle) {
  const Result r = invoke({"rpa-gap", data("toy_4orb.fcidump"), "--boson-max", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["oracle"]["boson_max"].get<int>(), 4);
  EXPECT_NEAR(j["gap_kcal_mol"].get<double>(), 627.509 * j["gap_hartree"].get<double>(), 1e-9);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"simulate", data("symmetry_violation.fcidump")}).status, 1);
  EXPECT_EQ(invoke({"rpa-gap", data("symmetry_violation.fcidump")}).status, 1);
  EXPECT_EQ(invoke({"simulate", "/nonexistent.json"}).status, 1);
  EXPECT_EQ(invoke({"frobnicate", data("ab.json")}).status, 1);

  const Result cap = invoke({"simulate", data("diphosphane_22.json"), "--solver", "exact"});
  EXPECT_EQ(cap.status, 2);
  EXPECT_NE(cap.err.find("ERROR[2]: "), std::string::npos) << cap.err;
  EXPECT_NE(cap.err.find("(dimension 4194304)"), std::string::npos) << cap.err;

  const Result unstable = invoke({"rpa-gap", data("unstable_4orb.fcidump")});
  EXPECT_EQ(unstable.status, 3);
  EXPECT_EQ(unstable.err.rfind("ERROR[3]: ", 0), 0u) << unstable.err;

  EXPECT_EQ(invoke({"rpa-gap", data("invalid_exchange_4orb.fcidump")}).status, 0);
  const Result strict = invoke({"rpa-gap", data("invalid_exchange_4orb.fcidump"), "--strict"});
  EXPECT_EQ(strict.status, 4);
  EXPECT_EQ(strict.err.rfind("ERROR[4]: ", 0), 0u) << strict.err;

  EXPECT_EQ(invoke({"simulate", data("ab.json"), "--grid", "-10,10,101", "--strict"}).status, 4);
}

TEST(Cli, DiagnosticsAreSingleLines) {
  const Result r = invoke({"simulate", data("diphosphane_22.json")});
  ASSERT_FALSE(r.err.empty());
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
}

TEST(Cli, ValidateReports) {
  const Result spins = invoke({"validate", data("diphosphane_22.json")});
  ASSERT_EQ(spins.status, 0) << spins.err;
  EXPECT_EQ(spins.out.rfind("OK", 0), 0u);
  EXPECT_NE(spins.out.find("largest_sector_dimension=1600"), std::string::npos) << spins.out;
  const Result ints = invoke({"validate", data("toy_4orb.fcidump")});
  ASSERT_EQ(ints.status, 0) << ints.err;
  EXPECT_EQ(ints.out.rfind("OK", 0), 0u);
  EXPECT_EQ(invoke({"validate", data("symmetry_violation.fcidump")}).status, 1);
}

TEST(Cli, OutputFileAndConfigPrecedence) {
  const auto cfg = scratch("run.toml");
  const auto out = scratch("spectrum.csv");
  {
    std::ofstream f(cfg);
    f << "broadening-hz=3\nsolver=symmetry\noutput=" << out.string() << "\n";
  }
  const Result from_file = invoke({"simulate", data("ab.json"), "--config", cfg.string()});
  ASSERT_EQ(from_file.status, 0) << from_file.err;
  EXPECT_TRUE(from_file.out.empty());
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("broadening_hz=3.000000"), std::string::npos) << header;
  EXPECT_NE(header.find("solver=symmetry"), std::string::npos) << header;

  const Result flag = invoke({"simulate", data("ab.json"), "--config", cfg.string(), "--broadening-hz", "4",
                              "--output", ""});
  ASSERT_EQ(flag.status, 0) << flag.err;
  EXPECT_NE(flag.out.find("broadening_hz=4.000000"), std::string::npos);
}

TEST(Cli, OutputIndependentOfThreadCount) {
  const std::vector<std::vector<std::string>> runs = {
      {"simulate", data("representative_50.json"), "--solver", "cluster", "--max-cluster-size", "6"},
      {"simulate", data("diphosphane_22.json"), "--solver", "symmetry"},
      {"simulate", data("ab.json"), "--solver", "sampled", "--samples", "500", "--seed", "9"},
      {"rpa-gap", data("toy_4orb.fcidump")},
  };
  for (auto args : runs) {
    std::string reference;
    for (const char* threads : {"1", "2", "8"}) {
      auto a = args;
      a.insert(a.end(), {"--threads", threads});
      const Result r = invoke(a);
      ASSERT_EQ(r.status, 0) << r.err;
      if (reference.empty())
        reference = r.out;
      else
        EXPECT_EQ(r.out, reference) << args[1] << " threads=" << threads;
    }
  }
}

}  // namespace
}  // namespace magsim::cli
