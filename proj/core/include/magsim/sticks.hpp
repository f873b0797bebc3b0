#pragma once

#include <string>
#include <vector>

#include "magsim/eigen_system.hpp"
#include "magsim/spin_operator.hpp"

namespace magsim {

// Lines with |amplitude| below this fraction of the largest are pruned.
inline constexpr double kAmplitudeFloor = 1e-12;

struct StickLine {
  double hz = 0.0;
  cplx amplitude;
};

struct StickSpectrum {
  std::vector<StickLine> lines;
  std::string detected_isotope;

  cplx total_amplitude() const;
};

// Transition lines of Tr[detect e^{-iHt} excite e^{iHt}]: for every pair of
// eigenstates (i, j) a line at (E_i - E_j) / 2pi with amplitude
// <i|detect|j><j|excite|i>. Lines are pruned at relative_floor and sorted.
StickSpectrum stick_spectrum(const EigenSystem& eigen, const SpinOperator& detect,
                             const SpinOperator& excite, double relative_floor = kAmplitudeFloor);

// Sorts lines by (frequency, Re, Im).
void sort_lines(StickSpectrum& sticks);

// Drops lines below relative_floor * max |amplitude|.
void prune_lines(StickSpectrum& sticks, double relative_floor = kAmplitudeFloor);

// Sums lines whose frequencies chain together within tolerance_hz. The
// merged line sits at the mean frequency of its members. Input must be sorted.
StickSpectrum merge_degenerate(const StickSpectrum& sticks, double tolerance_hz);

// Concatenation of several spectra, sorted.
StickSpectrum concatenate(const std::vector<StickSpectrum>& parts);

}  // namespace magsim
