#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "magsim/errors.hpp"
#include "magsim/rpa/integrals.hpp"
#include "magsim/rpa/model.hpp"
#include "magsim/rpa/oracle.hpp"
#include "magsim/rpa/two_orbital.hpp"
#include "oracles.hpp"

namespace magsim::rpa {
namespace {

IntegralSet toy() { return read_integrals(testing::data_path("toy_4orb.fcidump")); }

IntegralSet parse(const std::string& text) {
  std::istringstream in(text);
  return parse_integrals(in);
}

// Plain loops over the definitions, written independently of the library.
Eigen::MatrixXd naive_effective_hoppings(const IntegralSet& ints) {
  const std::size_t n = ints.n_orbitals();
  Eigen::MatrixXd t = ints.t();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t k = 2; k < n; ++k)
        if (ints.occupation(k) == 1) t(p, q) += 2.0 * ints.h(p, q, k, k) - ints.h(p, k, k, q);
  return t;
}

double naive_omega(const IntegralSet& ints, std::size_t m, std::size_t a) {
  const Eigen::MatrixXd t = naive_effective_hoppings(ints);
  return t(m, m) - t(a, a) - ints.h(m, m, a, a) + ints.h(m, a, m, a);
}

IntegralSet random_integrals(std::mt19937_64& rng, std::size_t n, std::vector<int> occ) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  IntegralSet ints(n, std::move(occ));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) ints.t()(p, q) = ints.t()(q, p) = u(rng);
  for (std::size_t p = 2; p < n; ++p) ints.t()(p, p) = ints.occupation(p) ? -2.0 - u(rng) : 2.0 + u(rng);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) ints.set_h(p, q, r, s, 0.3 + u(rng));
  return ints;
}

TEST(Integrals, ParsesToyFixture) {
  const IntegralSet ints = toy();
  EXPECT_EQ(ints.n_orbitals(), 4u);
  EXPECT_EQ(ints.occupied(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(ints.empty(), (std::vector<std::size_t>{3}));
  EXPECT_DOUBLE_EQ(ints.t()(0, 0), -0.50);
  EXPECT_DOUBLE_EQ(ints.t()(1, 0), -0.02);
  EXPECT_DOUBLE_EQ(ints.core_energy(), 5.0);
  EXPECT_DOUBLE_EQ(ints.h(0, 0, 2, 3), 0.030);
  EXPECT_DOUBLE_EQ(ints.h(3, 2, 0, 0), 0.030);
  EXPECT_DOUBLE_EQ(ints.h(1, 0, 3, 2), 0.015);
  EXPECT_LT(ints.symmetry_deviation(), 1e-15);
}

TEST(Integrals, WriteReadRoundTrip) {
  const IntegralSet ints = toy();
  std::ostringstream out;
  write_integrals(out, ints);
  const IntegralSet back = parse(out.str());
  EXPECT_EQ(back.environment_occupations(), ints.environment_occupations());
  EXPECT_LT((back.t() - ints.t()).cwiseAbs().maxCoeff(), 1e-15);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q)
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t s = 0; s < 4; ++s) EXPECT_DOUBLE_EQ(back.h(p, q, r, s), ints.h(p, q, r, s));
}

TEST(Integrals, ParseErrors) {
  EXPECT_THROW(parse("&FCI\n ENVOCC=1,0,\n&END\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=4,\n&END\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=4,\n ENVOCC=1,\n&END\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=4,\n ENVOCC=1,2,\n&END\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=1,\n ENVOCC=\n&END\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=2,\n ENVOCC=\n&END\n 0.1 1 2 3\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=2,\n ENVOCC=\n&END\n 0.1 1 1 1 7\n"), ParseError);
  EXPECT_THROW(parse(" 0.1 1 1 1 1\n"), ParseError);
}

TEST(Integrals, SymmetryViolationQuotesDeviation) {
  try {
    read_integrals(testing::data_path("symmetry_violation.fcidump"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("3.000e-02"), std::string::npos) << e.what();
  }
}

TEST(Integrals, RejectsPartialOccupation) {
  EXPECT_THROW(IntegralSet(4, {1}), std::invalid_argument);
  EXPECT_THROW(IntegralSet(4, {1, 2}), std::invalid_argument);
}

TEST(EffectiveHoppings, MatchesNaiveLoopsOnToy) {
  const IntegralSet ints = toy();
  EXPECT_LT((effective_hoppings(ints) - naive_effective_hoppings(ints)).cwiseAbs().maxCoeff(), 1e-12);
  // Hand evaluation: t33 + 2 (33|22) - (32|23) and t22 + (22|22).
  EXPECT_NEAR(effective_hoppings(ints)(3, 3), 2.80 + 2 * 0.38 - 0.03, 1e-12);
  EXPECT_NEAR(effective_hoppings(ints)(2, 2), -1.40 + 0.55, 1e-12);
}

TEST(EffectiveHoppings, MatchesNaiveLoopsWithTwoOccupied) {
  std::mt19937_64 rng(17);
  const IntegralSet ints = random_integrals(rng, 5, {1, 1, 0});
  EXPECT_LT((effective_hoppings(ints) - naive_effective_hoppings(ints)).cwiseAbs().maxCoeff(), 1e-12);
  const auto modes = mode_frequencies(ints, effective_hoppings(ints));
  ASSERT_EQ(modes.size(), 2u);
  for (const Mode& md : modes) EXPECT_NEAR(md.omega, naive_omega(ints, md.m, md.alpha), 1e-12);
}

IntegralSet single_mode(double tmm, double taa, double hmmaa, double hmama) {
  IntegralSet ints(4, {1, 0});
  ints.t()(3, 3) = tmm;
  ints.t()(2, 2) = taa;
  ints.set_h(3, 3, 2, 2, hmmaa);
  ints.set_h(3, 2, 3, 2, hmama);
  return ints;
}

TEST(Modes, ArithmeticExample) {
  const IntegralSet ints = single_mode(1.0, -1.0, 0.3, 0.1);
  Eigen::MatrixXd t = ints.t();  // evaluate with the given hoppings as t~
  const auto modes = mode_frequencies(ints, t);
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes[0].m, 3u);
  EXPECT_EQ(modes[0].alpha, 2u);
  EXPECT_NEAR(modes[0].omega, 1.8, 1e-15);
}

TEST(Modes, DegenerateLevelsAreUnstable) {
  const IntegralSet ints = single_mode(0.5, 0.5, 0.0, 0.0);
  EXPECT_THROW(mode_frequencies(ints, ints.t()), InstabilityError);
}

TEST(Modes, ToyFixtureByHand) {
  const IntegralSet ints = toy();
  const auto modes = mode_frequencies(ints, effective_hoppings(ints));
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_NEAR(modes[0].omega, 4.03, 1e-12);
  EXPECT_NEAR(modes[0].omega, naive_omega(ints, 3, 2), 1e-12);
}

TEST(Modes, UnstableFixture) {
  EXPECT_THROW(build_rpa_model(read_integrals(testing::data_path("unstable_4orb.fcidump"))), InstabilityError);
}

TEST(EnvironmentEnergy, ClosedShellDeterminant) {
  const IntegralSet ints = toy();
  EXPECT_NEAR(env_hf_energy(ints), 2 * -1.40 + 0.55, 1e-12);
}

TEST(Model, CouplingsAndOperators) {
  const IntegralSet ints = toy();
  const RpaModel model = build_rpa_model(ints).model;
  ASSERT_EQ(model.n_modes(), 1u);
  ASSERT_EQ(model.couplings.size(), 1u);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      EXPECT_NEAR(model.couplings[0](p, q), std::sqrt(2.0) * ints.h(p, q, 3, 2), 1e-12);
  SectorMatrix o = SectorMatrix::Zero();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) o += model.couplings[0](p, q) * excitation(p, q);
  EXPECT_LT((model.coupling_operator(0) - o).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(model.mode_mode(0, 0), ints.h(3, 2, 3, 2), 1e-15);
  EXPECT_NEAR(model.env_hf_energy, -2.25, 1e-12);
  EXPECT_LT((model.h12 - model.h12.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Model, HamiltonianUsesDressedHoppings) {
  const IntegralSet ints = toy();
  const RpaModel model = build_rpa_model(ints).model;
  const Eigen::MatrixXd t = naive_effective_hoppings(ints);
  ActiveIntegrals a;
  a.t = t.topLeftCorner<2, 2>();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) a.at(p, q, r, s) = ints.h(p, q, r, s);
  EXPECT_LT((model.h12 - two_orbital_hamiltonian(a)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Validity, WeakFixturePasses) {
  const RpaBuild b = build_rpa_model(toy());
  EXPECT_TRUE(b.validity.pass);
  EXPECT_NEAR(b.validity.exchange_ratio[0], 0.03 / 4.03, 1e-12);
  EXPECT_NEAR(b.validity.density_ratio[0], (0.50 + 0.55 - 2 * 0.38) / 4.03, 1e-12);
}

TEST(Validity, LargeExchangeFails) {
  const RpaBuild b = build_rpa_model(read_integrals(testing::data_path("invalid_exchange_4orb.fcidump")));
  EXPECT_FALSE(b.validity.pass);
  EXPECT_GT(b.validity.max_exchange_ratio, 1.0);
}

TEST(Validity, ThresholdIsConfigurable) {
  const IntegralSet ints = toy();
  EXPECT_FALSE(build_rpa_model(ints, 0.05).validity.pass);
  EXPECT_TRUE(build_rpa_model(ints, 0.10).validity.pass);
}

TEST(TwoOrbital, HubbardDimerGap) {
  const RpaModel model = build_rpa_model(read_integrals(testing::data_path("hubbard_2orb.fcidump"))).model;
  EXPECT_EQ(model.n_modes(), 0u);
  const double u = 0.4, t = 0.1;
  const double expected = 0.5 * (std::sqrt(u * u + 16 * t * t) - u);
  EXPECT_NEAR(static_gap(model).gap, expected, 1e-12);
  EXPECT_NEAR(bare_gap(model), expected, 1e-12);
}

TEST(TwoOrbital, SpinSubspaces) {
  const SpinSubspaces& s = spin_subspaces();
  const SectorMatrix s2 = spin_squared();
  EXPECT_LT((s2 * s.singlet).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((s2 * s.triplet - 2.0 * s.triplet).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((s.singlet.transpose() * s.triplet).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(StaticGap, ZeroCouplingRecoversBareGap) {
  const RpaModel model = build_rpa_model(read_integrals(testing::data_path("zero_coupling_4orb.fcidump"))).model;
  EXPECT_NEAR(static_gap(model).gap, bare_gap(model), 1e-12);
  EXPECT_NEAR(oracle_gap(model, 4), bare_gap(model), 1e-12);
}

TEST(Oracle, ZeroTruncationIsBareModel) {
  const RpaModel model = build_rpa_model(toy()).model;
  EXPECT_NEAR(oracle_gap(model, 0), bare_gap(model), 1e-12);
}

// Second-order energy shift of an eigenstate of h12 coupled to one
// oscillator through x O, summed over intermediate states with one quantum.
double second_order_shift(const SectorMatrix& h12, const SectorMatrix& o, double omega, bool triplet) {
  const SpinSubspaces& sub = spin_subspaces();
  const Eigen::Matrix<double, kSectorDim, 3> basis = triplet ? sub.triplet : sub.singlet;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(basis.transpose() * h12 * basis);
  const Eigen::Matrix<double, kSectorDim, 3> states = basis * es.eigenvectors();
  double shift = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double mel = states.col(k).dot(o * states.col(0));
    shift -= mel * mel / (es.eigenvalues()(k) - es.eigenvalues()(0) + omega);
  }
  return shift;
}

TEST(StaticGap, MatchesSecondOrderPerturbationTheory) {
  ActiveIntegrals a;
  a.t << 0.0, -0.1, -0.1, 0.0;
  a.at(0, 0, 0, 0) = a.at(1, 1, 1, 1) = 0.4;
  RpaModel model;
  model.h12 = two_orbital_hamiltonian(a);
  // Static elimination also resums (g^2/w)/dE; keep both it and dE/w small.
  const double omega = 10.0;
  const double g = std::sqrt(1e-3) * omega;
  model.modes = {Mode{3, 2, omega}};
  Eigen::Matrix2d c;
  c << 0.6 * g, 0.3 * g, 0.3 * g, -0.2 * g;
  model.couplings = {c};
  model.mode_mode = Eigen::MatrixXd::Zero(1, 1);
  const SectorMatrix o = model.coupling_operator(0);
  const double pt = second_order_shift(model.h12, o, omega, true) - second_order_shift(model.h12, o, omega, false);
  const double shift = static_gap(model).gap - bare_gap(model);
  ASSERT_GT(std::abs(pt), 1e-6);
  EXPECT_NEAR(shift, pt, 0.05 * std::abs(pt));
}

TEST(StaticGap, IndefiniteBosonFormIsUnstable) {
  RpaModel model = build_rpa_model(toy()).model;
  model.mode_mode(0, 0) = -2.0 * model.modes[0].omega;
  EXPECT_THROW(static_gap(model), InstabilityError);
}

TEST(Oracle, TripletIsThreefoldDegenerate) {
  const RpaModel model = build_rpa_model(toy()).model;
  const Eigen::MatrixXd h = oracle_hamiltonian(model, 4);
  const Eigen::MatrixXd s2 = oracle_spin_squared(model, 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spin(s2);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < spin.eigenvalues().size(); ++i)
    if (std::abs(spin.eigenvalues()(i) - 2.0) < 1e-8) cols.push_back(i);
  Eigen::MatrixXd basis(h.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = spin.eigenvectors().col(cols[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(basis.transpose() * h * basis);
  const Eigen::VectorXd e = es.eigenvalues();
  EXPECT_NEAR(e(0), e(1), 1e-10);
  EXPECT_NEAR(e(0), e(2), 1e-10);
  EXPECT_GT(e(3) - e(0), 1e-3);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Oracle, CapacityIsEnforced) {
  RpaModel model = build_rpa_model(toy()).model;
  EXPECT_EQ(oracle_dimension(model, 8), 54u);
  model.modes.resize(4, model.modes[0]);
  EXPECT_THROW(oracle_dimension(model, 8), CapacityError);
}

TEST(Oracle, EnvironmentConstantsLeaveGapUnchanged) {
  IntegralSet ints = toy();
  const RpaModel base = build_rpa_model(ints).model;
  for (std::size_t q = 2; q < 4; ++q) ints.t()(q, q) += 0.75;
  const RpaModel shifted = build_rpa_model(ints).model;
  EXPECT_NEAR(shifted.env_hf_energy - base.env_hf_energy, 2 * 0.75, 1e-12);
  EXPECT_NEAR(static_gap(shifted).gap, static_gap(base).gap, 1e-10);
  EXPECT_NEAR(oracle_gap(shifted, 4), oracle_gap(base, 4), 1e-10);
}

TEST(Oracle, TruncationSweepConverges) {
  const RpaModel model = build_rpa_model(toy()).model;
  const OracleSweep sweep = extrapolated_oracle_gap(model);
  ASSERT_EQ(sweep.gaps.size(), 3u);
  EXPECT_LT(std::abs(sweep.gaps[2] - sweep.gaps[1]), std::abs(sweep.gaps[1] - sweep.gaps[0]) + 1e-15);
}

double static_vs_oracle(const IntegralSet& ints) {
  const RpaModel model = build_rpa_model(ints).model;
  const double correction = static_gap(model).gap - bare_gap(model);
  return std::abs(static_gap(model).gap - extrapolated_oracle_gap(model).extrapolated) / std::abs(correction);
}

TEST(StaticGap, AgreesWithOracleOnToy) {
  const RpaModel model = build_rpa_model(toy()).model;
  const double s = static_gap(model).gap;
  const double o = extrapolated_oracle_gap(model).extrapolated;
  EXPECT_NEAR(s, o, std::max(1e-6, 0.05 * std::abs(s - bare_gap(model))));
}

TEST(StaticGap, DiscrepancyFallsWithModeFrequency) {
  IntegralSet fast = toy();
  fast.t()(3, 3) += 4.0;
  const double slow_error = static_vs_oracle(toy());
  const double fast_error = static_vs_oracle(fast);
  EXPECT_LT(fast_error, 0.7 * slow_error);
}

}  // namespace
}  // namespace magsim::rpa
