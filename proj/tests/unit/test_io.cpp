#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "magsim/errors.hpp"
#include "magsim/io.hpp"
#include "oracles.hpp"

namespace magsim {
namespace {

SpinSystemFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_spin_system(in);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(SpinSystemJson, ParsesFixture) {
  const SpinSystemFile f = read_spin_system(testing::data_path("ab.json"));
  EXPECT_EQ(f.system.size(), 2u);
  EXPECT_DOUBLE_EQ(f.system.field_tesla(), 9.4);
  EXPECT_DOUBLE_EQ(f.system.spin(1).shift_ppm, 2.05);
  EXPECT_DOUBLE_EQ(f.system.coupling_hz(1, 0), 10.0);
  EXPECT_FALSE(f.equivalence_groups.has_value());
}

TEST(SpinSystemJson, SymmetricDuplicatesAccepted) {
  const SpinSystemFile f = parse(R"({"field_tesla": 9.4,
    "spins": [{"isotope": "1H", "shift_ppm": 1}, {"isotope": "13C", "shift_ppm": 30}],
    "j_couplings": [{"i": 0, "j": 1, "hz": 125}, {"i": 1, "j": 0, "hz": 125}],
    "equivalence_groups": [[0]]})");
  EXPECT_DOUBLE_EQ(f.system.coupling_hz(0, 1), 125.0);
  ASSERT_TRUE(f.equivalence_groups.has_value());
  EXPECT_EQ(f.equivalence_groups->size(), 1u);
}

TEST(SpinSystemJson, AsymmetricEntryNamesSpins) {
  const std::string msg = parse_error(R"({"field_tesla": 9.4,
    "spins": [{"isotope": "1H", "shift_ppm": 1}, {"isotope": "1H", "shift_ppm": 2}],
    "j_couplings": [{"i": 0, "j": 1, "hz": 7}, {"i": 1, "j": 0, "hz": 8}]})");
  EXPECT_NE(msg.find("asymmetric J entry between spins 0 and 1"), std::string::npos) << msg;
}

TEST(SpinSystemJson, Rejections) {
  const std::string spins = R"("spins": [{"isotope": "1H", "shift_ppm": 1}, {"isotope": "1H", "shift_ppm": 2}])";
  EXPECT_NE(parse_error(R"({"field_tesla": 9.4, )" + spins + R"(, "j_couplings": [{"i": 1, "j": 1, "hz": 7}]})")
                .find("self-coupling"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"field_tesla": 9.4, )" + spins + R"(, "j_couplings": [{"i": 0, "j": 5, "hz": 7}]})")
                .find("out of range"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"field_tesla": 0, )" + spins + "}").find("positive"), std::string::npos);
  EXPECT_NE(parse_error("{" + spins + "}").find("field_tesla"), std::string::npos);
  EXPECT_FALSE(parse_error(R"({"field_tesla": 9.4, "spins": []})").empty());
  EXPECT_FALSE(parse_error(R"({"field_tesla": 9.4, "spins": [{"isotope": "99Zz", "shift_ppm": 1}]})").empty());
  EXPECT_FALSE(parse_error("{not json").empty());
  EXPECT_FALSE(parse_error("[1, 2]").empty());
  EXPECT_THROW(read_spin_system("/nonexistent/file.json"), ParseError);
}

TEST(SticksJson, RoundTripsValues) {
  StickSpectrum s;
  s.lines = {{-12.5, cplx(0.25, 0.0)}, {3.0, cplx(0.75, -1e-3)}};
  const auto j = nlohmann::json::parse(sticks_to_json(s));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_DOUBLE_EQ(j[0]["hz"].get<double>(), -12.5);
  EXPECT_DOUBLE_EQ(j[1]["re"].get<double>(), 0.75);
  EXPECT_DOUBLE_EQ(j[1]["im"].get<double>(), -1e-3);
}

Spectrum small_spectrum() {
  Spectrum s;
  s.grid = {-10.0, 10.0, 5};
  s.intensity = {0.0, 1.0, 2.0, 3.0, 4.0};
  s.metadata = {400.0, 1.5, "exact"};
  return s;
}

TEST(SpectrumCsv, HeaderAndDescendingPpm) {
  std::ostringstream out;
  write_spectrum_csv(out, small_spectrum(), {{"input", "ab.json"}});
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_EQ(lines[0], "# reference_mhz=400.000000000, broadening_hz=1.500000, solver=exact");
  EXPECT_EQ(lines[1], "# format_version=1");
  EXPECT_EQ(lines[2], "# input=ab.json");
  EXPECT_EQ(lines[3], "ppm,hz,intensity");
  EXPECT_EQ(lines[4], "0.02500000,10.000000,4.000000000000e+00");
  EXPECT_EQ(lines[8], "-0.02500000,-10.000000,0.000000000000e+00");
}

TEST(PeakJson, Layout) {
  const auto j = nlohmann::json::parse(peak_table_json({{40.0, 2.0, 0.5}}, 400.0));
  EXPECT_EQ(j["format_version"].get<int>(), kFormatVersion);
  EXPECT_DOUBLE_EQ(j["peaks"][0]["ppm"].get<double>(), 0.1);
  EXPECT_DOUBLE_EQ(j["peaks"][0]["area"].get<double>(), 0.5);
}

}  // namespace
}  // namespace magsim
