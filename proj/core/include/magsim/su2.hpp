#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "magsim/spin_system.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

struct Multiplet {
  int twice_j = 0;
  std::uint64_t multiplicity = 0;

  double j() const { return 0.5 * twice_j; }
};

// Total-spin content of n coupled spin-1/2 particles.
struct MultipletDecomposition {
  std::size_t group_size = 0;
  std::vector<Multiplet> sectors;  // descending j

  // sum_j multiplicity (2j + 1); equals 2^n.
  std::uint64_t dimension() const;
};

// Multiplicities from m(n, j) = m(n-1, j-1/2) + m(n-1, j+1/2).
MultipletDecomposition decompose_group(std::size_t n);

// Spins of one isotope with a common shift and identical couplings to every
// spin outside the group.
struct EquivalenceGroup {
  std::vector<std::size_t> members;  // ascending
  std::string isotope;
  double common_shift_ppm = 0.0;
};

struct EquivalenceTolerance {
  double ppm = 1e-6;
  double hz = 1e-6;
};

// Maximal groups found greedily in spin-index order; every spin appears in
// exactly one group (singletons included).
std::vector<EquivalenceGroup> detect_equivalence_groups(const SpinSystem& system,
                                                        EquivalenceTolerance tolerance = {});

// Builds groups from explicit index lists and checks the invariants. Spins
// not listed become singleton groups. Throws std::invalid_argument naming
// the offending indices.
std::vector<EquivalenceGroup> make_equivalence_groups(
    const SpinSystem& system, const std::vector<std::vector<std::size_t>>& indices,
    EquivalenceTolerance tolerance = {});

// prod_groups sum_j m_j (2j + 1) * 2^(free spins).
std::uint64_t symmetric_dimension(const SpinSystem& system,
                                  const std::vector<EquivalenceGroup>& groups);

struct SymmetricSolution {
  StickSpectrum sticks;
  std::size_t sectors = 0;
  std::size_t largest_block = 0;     // dimension of the largest sector Hamiltonian
  std::size_t largest_subspace = 0;  // largest invariant subspace diagonalized densely
};

// Exact spectrum using composite spins: every multi-spin group is replaced by
// a single spin-j site for each sector j, blocks are solved independently
// and their lines weighted by the product of sector multiplicities.
// Intra-group couplings are dropped (they commute with everything else).
// Throws CapacityError when a sector block exceeds kMaxExactDimension.
SymmetricSolution simulate_symmetric(const SpinSystem& system,
                                     const std::vector<EquivalenceGroup>& groups,
                                     const ReferenceFrame& frame, std::string_view detect_isotope,
                                     EquivalenceTolerance tolerance = {});

}  // namespace magsim
