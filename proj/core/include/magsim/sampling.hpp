#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "magsim/eigen_system.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

// Exhaustive enumeration of the 2^N initial states is used up to this size.
inline constexpr std::size_t kMaxExhaustiveSpins = 12;

struct SampledSpectrum {
  StickSpectrum sticks;
  // Standard error of each line amplitude (real and imaginary parts
  // separately); zero in exhaustive mode.
  std::vector<cplx> standard_error;
  std::size_t samples = 0;
  bool exhaustive = false;
};

// Classical emulation of the state-sampling measurement protocol. Initial
// states are product eigenstates |psi> of the single-spin I^y operators;
// each contributes m_psi <psi| e^{iHt} detect e^{-iHt} |psi>, where m_psi is
// the collective I^y eigenvalue over `weighted_sites`. Lines are indexed by
// eigenstate pairs exactly as in stick_spectrum.
//
// n_samples == nullopt enumerates all 2^N states (N <= kMaxExhaustiveSpins);
// otherwise states are drawn uniformly with per-sample generators seeded from
// (seed, sample index), and amplitudes are scaled by 2^N. Results do not
// depend on the worker count.
SampledSpectrum sampled_expectation(const EigenSystem& eigen, const SpinOperator& detect,
                                    std::size_t n_spins,
                                    std::span<const std::size_t> weighted_sites,
                                    std::optional<std::size_t> n_samples, std::uint64_t seed);

}  // namespace magsim
