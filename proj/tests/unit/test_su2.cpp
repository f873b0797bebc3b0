#include <gtest/gtest.h>

#include "magsim/errors.hpp"
#include "magsim/exact_solver.hpp"
#include "magsim/io.hpp"
#include "magsim/su2.hpp"
#include "oracles.hpp"

namespace magsim {
namespace {

std::vector<std::uint64_t> multiplicities(const MultipletDecomposition& d) {
  std::vector<std::uint64_t> m;
  for (const auto& s : d.sectors) m.push_back(s.multiplicity);
  return m;
}

TEST(Decompose, SmallGroups) {
  const auto d2 = decompose_group(2);
  ASSERT_EQ(d2.sectors.size(), 2u);
  EXPECT_EQ(d2.sectors[0].twice_j, 2);
  EXPECT_EQ(multiplicities(d2), (std::vector<std::uint64_t>{1, 1}));
  const auto d3 = decompose_group(3);
  EXPECT_EQ(d3.sectors[0].twice_j, 3);
  EXPECT_EQ(multiplicities(d3), (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(d3.dimension(), 8u);
}

TEST(Decompose, NineSpins) {
  const auto d = decompose_group(9);
  EXPECT_EQ(multiplicities(d), (std::vector<std::uint64_t>{1, 8, 27, 48, 42}));
  EXPECT_EQ(d.sectors.back().twice_j, 1);
  EXPECT_EQ(d.dimension(), 512u);
}

TEST(Decompose, DimensionIsPowerOfTwo) {
  for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(decompose_group(n).dimension(), std::uint64_t{1} << n) << n;
}

SpinSystem a_n_x(std::size_t n, double j_ax) {
  const Isotope& h = isotope_by_symbol("1H");
  std::vector<Spin> spins(n, Spin{h, 1.2});
  spins.push_back({h, 3.6});
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    j(k, n) = j(n, k) = j_ax;
    for (std::size_t l = 0; l < k; ++l) j(k, l) = j(l, k) = -12.0;
  }
  return SpinSystem(spins, j, 9.4);
}

TEST(Groups, DistinctShiftsAreSingletons) {
  const SpinSystem sys = testing::ab_system(0.0, 30.0, 5.0);
  EXPECT_EQ(detect_equivalence_groups(sys).size(), 2u);
}

TEST(Groups, DetectsMethyl) {
  const auto groups = detect_equivalence_groups(a_n_x(3, 7.0));
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(groups[1].members, (std::vector<std::size_t>{3}));
}

TEST(Groups, UnequalOutsideCouplingSplitsGroup) {
  SpinSystem sys = a_n_x(2, 7.0);
  Eigen::MatrixXd j = sys.couplings_hz();
  j(1, 2) = j(2, 1) = 6.0;
  const SpinSystem broken(sys.spins(), j, 9.4);
  EXPECT_EQ(detect_equivalence_groups(broken).size(), 3u);
  EXPECT_THROW(make_equivalence_groups(broken, {{0, 1}}), std::invalid_argument);
}

TEST(Groups, InvalidExplicitGroupsThrow) {
  const SpinSystem sys = a_n_x(3, 7.0);
  EXPECT_THROW(make_equivalence_groups(sys, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(make_equivalence_groups(sys, {{0, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(make_equivalence_groups(sys, {{0, 9}}), std::invalid_argument);
  EXPECT_EQ(make_equivalence_groups(sys, {{0, 1, 2}}).size(), 2u);
}

TEST(Groups, DiphosphaneHasTwoNineSpinGroups) {
  const SpinSystemFile f = read_spin_system(testing::data_path("diphosphane_22.json"));
  const auto groups = detect_equivalence_groups(f.system);
  std::size_t nines = 0;
  for (const auto& g : groups) nines += g.members.size() == 9;
  EXPECT_EQ(nines, 2u);
}

void expect_matches_exact(const SpinSystem& sys) {
  const ReferenceFrame frame = ReferenceFrame::larmor(sys);
  const SymmetricSolution s = simulate_symmetric(sys, detect_equivalence_groups(sys), frame, "1H");
  EXPECT_LT(testing::stick_difference(s.sticks, simulate_exact(sys, frame, "1H")), 1e-9);
}

TEST(Symmetric, MatchesExactForA2X) { expect_matches_exact(a_n_x(2, 7.0)); }
TEST(Symmetric, MatchesExactForA3X) { expect_matches_exact(a_n_x(3, 7.0)); }

TEST(Symmetric, MatchesExactForStronglyCoupledA3B2) {
  const Isotope& h = isotope_by_symbol("1H");
  std::vector<Spin> spins{{h, 1.20}, {h, 1.20}, {h, 1.20}, {h, 1.25}, {h, 1.25}};
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(5, 5);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 3; b < 5; ++b) j(a, b) = j(b, a) = 7.2;
  j(0, 1) = j(1, 0) = j(0, 2) = j(2, 0) = j(1, 2) = j(2, 1) = -12.0;
  j(3, 4) = j(4, 3) = -14.0;
  expect_matches_exact(SpinSystem(spins, j, 9.4));
}

TEST(Symmetric, MethylQuartetIntensities) {
  const Isotope& h = isotope_by_symbol("1H");
  const Isotope& c = isotope_by_symbol("13C");
  std::vector<Spin> spins{{h, 1.0}, {h, 1.0}, {h, 1.0}, {c, 30.0}};
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  for (std::size_t k = 0; k < 3; ++k) j(k, 3) = j(3, k) = 125.0;
  const SpinSystem sys(spins, j, 9.4);
  const auto groups = detect_equivalence_groups(sys);
  const SymmetricSolution s = simulate_symmetric(sys, groups, ReferenceFrame::larmor(sys), "13C");
  const StickSpectrum merged = merge_degenerate(s.sticks, 1e-6);
  ASSERT_EQ(merged.lines.size(), 4u);
  const double unit = merged.lines[0].amplitude.real();
  const double expected[] = {1.0, 3.0, 3.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(merged.lines[i].amplitude.real() / unit, expected[i], 1e-9);
  EXPECT_NEAR(merged.lines[1].hz - merged.lines[0].hz, 125.0, 1e-9);
}

TEST(Symmetric, EquivalentPairGivesSingleLine) {
  const Isotope& h = isotope_by_symbol("1H");
  Eigen::Matrix2d j;
  j << 0.0, 9.0, 9.0, 0.0;
  const SpinSystem sys({{h, 2.0}, {h, 2.0}}, j, 9.4);
  const SymmetricSolution s =
      simulate_symmetric(sys, detect_equivalence_groups(sys), ReferenceFrame::larmor(sys), "1H");
  const StickSpectrum merged = merge_degenerate(s.sticks, 1e-6);
  ASSERT_EQ(merged.lines.size(), 1u);
  EXPECT_NEAR(merged.lines[0].amplitude.real(), 2.0, 1e-9);
}

TEST(Symmetric, DimensionBookkeeping) {
  const SpinSystem sys = a_n_x(3, 7.0);
  const auto groups = detect_equivalence_groups(sys);
  EXPECT_EQ(symmetric_dimension(sys, groups), 16u);
  const SymmetricSolution s = simulate_symmetric(sys, groups, ReferenceFrame::larmor(sys), "1H");
  EXPECT_EQ(s.sectors, 2u);
  EXPECT_EQ(s.largest_block, 8u);
}

TEST(Symmetric, DiphosphaneFitsWhereExactDoesNot) {
  const SpinSystemFile f = read_spin_system(testing::data_path("diphosphane_22.json"));
  const ReferenceFrame frame = ReferenceFrame::larmor(f.system);
  EXPECT_THROW(simulate_exact(f.system, frame, "1H"), CapacityError);
  const SymmetricSolution s =
      simulate_symmetric(f.system, detect_equivalence_groups(f.system), frame, "1H");
  EXPECT_LE(s.largest_block, 4096u);
  EXPECT_NEAR(s.sticks.total_amplitude().real(), 20.0, 1e-6);
}

}  // namespace
}  // namespace magsim
