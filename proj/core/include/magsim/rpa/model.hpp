#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "magsim/rpa/integrals.hpp"
#include "magsim/rpa/two_orbital.hpp"

namespace magsim::rpa {

inline constexpr double kHartreeToKcalMol = 627.509;
inline constexpr double kDefaultValidityThreshold = 0.25;

// Fermion-boson model: active pair coupled linearly to one oscillator per
// environment particle-hole pair,
//   H = h12 + E_HF + sum_i (w_i a+_i a_i - h_mama) + sum_ij M_ij x_i x_j
//       + sum_i x_i O_i,    x = a + a+,  O_i = sum_pq g_pq,i E_pq.
struct RpaModel {
  // Active Hamiltonian on the two-electron sector. One-electron terms use
  // the hoppings dressed by the closed-shell environment.
  SectorMatrix h12 = SectorMatrix::Zero();
  std::vector<Mode> modes;
  // g_pq = sqrt(2) h_pq,ma for p, q in the active pair; one matrix per mode.
  std::vector<Eigen::Matrix2d> couplings;
  Eigen::MatrixXd mode_mode;  // M_ij = h_{m_i a_i, m_j a_j}
  double env_hf_energy = 0.0;
  double core_energy = 0.0;

  std::size_t n_modes() const { return modes.size(); }
  // Covalent 4x4 block of h12 (the |1s 2s'> states).
  Eigen::Matrix4d covalent_block() const { return h12.topLeftCorner<4, 4>(); }
  // O_i on the sector.
  SectorMatrix coupling_operator(std::size_t mode) const;
  // Constant part of H_env: E_HF - sum_i h_mama.
  double environment_offset() const;
};

struct ValidityReport {
  std::vector<double> exchange_ratio;  // h_mama / w
  std::vector<double> density_ratio;   // (h_mmmm + h_aaaa - 2 h_mmaa) / w
  double max_exchange_ratio = 0.0;
  double max_density_ratio = 0.0;
  double threshold = kDefaultValidityThreshold;
  bool pass = true;
};

struct RpaBuild {
  RpaModel model;
  ValidityReport validity;
};

RpaBuild build_rpa_model(const IntegralSet& ints, double validity_threshold = kDefaultValidityThreshold);

struct StaticGap {
  double gap = 0.0;  // Hartree, E_T - E_S
  SectorMatrix renormalized_h12 = SectorMatrix::Zero();
  SpinLevels levels;
};

// Eliminates the oscillators in the static limit: with A = diag(w)/4 + M,
// h12 -> h12 - 1/4 sum_ij O_i (A^-1)_ij O_j, evaluated through the normal
// modes of A. Throws InstabilityError if A is not positive definite.
StaticGap static_gap(const RpaModel& model);

// Gap of h12 with the environment switched off.
double bare_gap(const RpaModel& model);

}  // namespace magsim::rpa
