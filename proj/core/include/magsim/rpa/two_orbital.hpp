#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

namespace magsim::rpa {

// Two electrons in the two active orbitals. Basis order:
//   0 |1u 2u>   1 |1u 2d>   2 |1d 2u>   3 |1d 2d>   (covalent)
//   4 |1u 1d>   5 |2u 2d>                           (ionic)
// Determinants are ordered creation strings over spin orbitals 2p + s.
inline constexpr int kSectorDim = 6;
inline constexpr int kCovalentDim = 4;
using SectorMatrix = Eigen::Matrix<double, kSectorDim, kSectorDim>;

// Active-space integrals, indices 0 and 1. h uses the chemist convention.
struct ActiveIntegrals {
  Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
  std::array<double, 16> h{};
  double& at(int p, int q, int r, int s) { return h[static_cast<std::size_t>(((p * 2 + q) * 2 + r) * 2 + s)]; }
  double at(int p, int q, int r, int s) const { return h[static_cast<std::size_t>(((p * 2 + q) * 2 + r) * 2 + s)]; }
};

// sum_s c+_ps c_qs restricted to the sector.
SectorMatrix excitation(int p, int q);

// sum_{s,s'} c+_ps c+_qs' c_rs' c_ss.
SectorMatrix pair_operator(int p, int q, int r, int s);

// Total S^2 of the active electrons.
SectorMatrix spin_squared();

// S^z of the active electrons.
SectorMatrix spin_z();

// sum t_pq E_pq + 1/2 sum h_psqr c+_p c+_q c_r c_s.
SectorMatrix two_orbital_hamiltonian(const ActiveIntegrals& ints);

// Orthonormal bases of the singlet (S^2 = 0) and triplet (S^2 = 2)
// subspaces, three columns each.
struct SpinSubspaces {
  Eigen::Matrix<double, kSectorDim, 3> singlet;
  Eigen::Matrix<double, kSectorDim, 3> triplet;
};
const SpinSubspaces& spin_subspaces();

struct SpinLevels {
  double singlet = 0.0;  // lowest singlet energy
  double triplet = 0.0;  // lowest triplet energy
  // E_T - E_S; positive for a singlet ground state.
  double gap() const { return triplet - singlet; }
};

// Lowest singlet and triplet energies of a spin-free sector Hamiltonian.
SpinLevels spin_levels(const SectorMatrix& h);

}  // namespace magsim::rpa
