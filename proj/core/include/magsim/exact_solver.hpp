#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "magsim/hamiltonian.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

// Largest number of spin-1/2 sites (equivalently a 2^14 Hilbert space)
// handed to the dense block solver.
inline constexpr std::size_t kMaxExactSpins = 14;
inline constexpr Eigen::Index kMaxExactDimension = Eigen::Index{1} << kMaxExactSpins;

// Lines closer than this are merged after solving; it only removes exact
// degeneracies split by round-off.
inline constexpr double kMergeToleranceHz = 1e-10;

struct Detection {
  SpinOperator detect;  // sum of S+ over detected sites
  SpinOperator excite;  // sum of S^y over excited sites
};

Detection detection_operators(const ProductSpace& space, std::span<const std::size_t> detected,
                              std::span<const std::size_t> excited);

// Rescales raw trace amplitudes computed in a Hilbert space of the given
// dimension so that each detected spin-1/2 contributes unit total amplitude:
// divides by Tr[S+ S^y] = i * dimension / 4.
void normalize_to_spin_count(StickSpectrum& sticks, double dimension);

// Exact spectrum of the whole system with detection and excitation on the
// given isotope. Throws CapacityError above kMaxExactSpins.
StickSpectrum simulate_exact(const SpinSystem& system, const ReferenceFrame& frame,
                             std::string_view detect_isotope);

}  // namespace magsim
