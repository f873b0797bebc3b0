#include "magsim/rpa/two_orbital.hpp"

#include <bit>
#include <cstdint>
#include <optional>

#include <Eigen/Eigenvalues>

namespace magsim::rpa {
namespace {

// Occupation bitmasks over spin orbitals 0:1u 1:1d 2:2u 3:2d.
constexpr std::array<std::uint32_t, kSectorDim> kBasis = {
    0b0101,  // 1u 2u
    0b1001,  // 1u 2d
    0b0110,  // 1d 2u
    0b1010,  // 1d 2d
    0b0011,  // 1u 1d
    0b1100,  // 2u 2d
};

int sector_index(std::uint32_t mask) {
  for (int i = 0; i < kSectorDim; ++i) {
    if (kBasis[static_cast<std::size_t>(i)] == mask) return i;
  }
  return -1;
}

struct FockState {
  std::uint32_t mask;
  double amplitude;
};

// Jordan-Wigner sign: parity of occupied orbitals below `so`.
double parity_below(std::uint32_t mask, int so) {
  return (std::popcount(mask & ((1u << so) - 1u)) % 2 == 0) ? 1.0 : -1.0;
}

std::optional<FockState> annihilate(FockState st, int so) {
  if (!(st.mask & (1u << so))) return std::nullopt;
  return FockState{st.mask & ~(1u << so), st.amplitude * parity_below(st.mask, so)};
}

std::optional<FockState> create(FockState st, int so) {
  if (st.mask & (1u << so)) return std::nullopt;
  return FockState{st.mask | (1u << so), st.amplitude * parity_below(st.mask, so)};
}

struct Ladder {
  bool dagger;
  int so;
};

// Matrix of a product of ladder operators (rightmost acts first).
template <std::size_t K>
SectorMatrix product(const std::array<Ladder, K>& ops) {
  SectorMatrix m = SectorMatrix::Zero();
  for (int col = 0; col < kSectorDim; ++col) {
    std::optional<FockState> st = FockState{kBasis[static_cast<std::size_t>(col)], 1.0};
    for (std::size_t k = K; k-- > 0 && st;) {
      st = ops[k].dagger ? create(*st, ops[k].so) : annihilate(*st, ops[k].so);
    }
    if (!st) continue;
    const int row = sector_index(st->mask);
    if (row >= 0) m(row, col) += st->amplitude;
  }
  return m;
}

constexpr int so(int p, int s) { return 2 * p + s; }

}  // namespace

SectorMatrix excitation(int p, int q) {
  SectorMatrix m = SectorMatrix::Zero();
  for (int s = 0; s < 2; ++s) m += product<2>({{{true, so(p, s)}, {false, so(q, s)}}});
  return m;
}

SectorMatrix pair_operator(int p, int q, int r, int s) {
  SectorMatrix m = SectorMatrix::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      m += product<4>({{{true, so(p, a)}, {true, so(q, b)}, {false, so(r, b)}, {false, so(s, a)}}});
  return m;
}

SectorMatrix spin_z() {
  SectorMatrix m = SectorMatrix::Zero();
  for (int p = 0; p < 2; ++p) {
    m += 0.5 * product<2>({{{true, so(p, 0)}, {false, so(p, 0)}}});
    m -= 0.5 * product<2>({{{true, so(p, 1)}, {false, so(p, 1)}}});
  }
  return m;
}

SectorMatrix spin_squared() {
  // S^2 = S- S+ + Sz^2 + Sz, with S+ = sum_p c+_pu c_pd.
  SectorMatrix minus_plus = SectorMatrix::Zero();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      minus_plus += product<4>({{{true, so(p, 1)}, {false, so(p, 0)}, {true, so(q, 0)}, {false, so(q, 1)}}});
  const SectorMatrix sz = spin_z();
  return minus_plus + sz * sz + sz;
}

SectorMatrix two_orbital_hamiltonian(const ActiveIntegrals& ints) {
  SectorMatrix h = SectorMatrix::Zero();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) h += ints.t(p, q) * excitation(p, q);
  for (int p = 0; p < 2; ++p)
    for (int s = 0; s < 2; ++s)
      for (int q = 0; q < 2; ++q)
        for (int r = 0; r < 2; ++r) {
          const double v = ints.at(p, s, q, r);
          if (v != 0.0) h += 0.5 * v * pair_operator(p, q, r, s);
        }
  return h;
}

const SpinSubspaces& spin_subspaces() {
  static const SpinSubspaces subspaces = [] {
    Eigen::SelfAdjointEigenSolver<SectorMatrix> es(spin_squared());
    // Eigenvalues are 0 (x3) then 2 (x3).
    SpinSubspaces out;
    out.singlet = es.eigenvectors().leftCols<3>();
    out.triplet = es.eigenvectors().rightCols<3>();
    return out;
  }();
  return subspaces;
}

SpinLevels spin_levels(const SectorMatrix& h) {
  const auto& sub = spin_subspaces();
  const Eigen::Matrix3d hs = sub.singlet.transpose() * h * sub.singlet;
  const Eigen::Matrix3d ht = sub.triplet.transpose() * h * sub.triplet;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(hs, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> et(ht, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), et.eigenvalues()(0)};
}

}  // namespace magsim::rpa
