#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "magsim/rpa/model.hpp"

namespace magsim::rpa {

// Largest dense fermion-boson matrix the oracle builds.
inline constexpr std::size_t kOracleCapacity = 10000;

// Dimension kSectorDim * (n_boson_max + 1)^n_modes; throws CapacityError
// above kOracleCapacity.
std::size_t oracle_dimension(const RpaModel& model, std::size_t n_boson_max);

// Full fermion-boson Hamiltonian, fermion index slowest.
Eigen::MatrixXd oracle_hamiltonian(const RpaModel& model, std::size_t n_boson_max);

// S^2 of the active electrons on the same product space.
Eigen::MatrixXd oracle_spin_squared(const RpaModel& model, std::size_t n_boson_max);

// E_T - E_S from the truncated model, solved separately in the singlet and
// triplet subspaces.
double oracle_gap(const RpaModel& model, std::size_t n_boson_max);

struct OracleSweep {
  std::vector<std::size_t> truncations;
  std::vector<double> gaps;
  double extrapolated = 0.0;
};

// Gaps at the given truncations plus an Aitken delta-squared estimate of the
// limit from the last three (the last value when fewer, or when the
// sequence has stopped moving).
OracleSweep extrapolated_oracle_gap(const RpaModel& model, const std::vector<std::size_t>& truncations = {2, 4, 8});

}  // namespace magsim::rpa
