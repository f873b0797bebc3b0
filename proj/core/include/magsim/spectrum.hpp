#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "magsim/fid.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

// Uniform frequency axis start, start + step, ..., stop (inclusive).
struct FrequencyGrid {
  double start_hz = 0.0;
  double stop_hz = 0.0;
  std::size_t points = 0;

  double step() const { return (stop_hz - start_hz) / static_cast<double>(points - 1); }
  double at(std::size_t i) const { return start_hz + step() * static_cast<double>(i); }
  bool operator==(const FrequencyGrid&) const = default;
};

struct SpectrumMetadata {
  double reference_mhz = 0.0;  // carrier of the detected isotope
  double broadening_hz = 0.0;  // Lorentzian FWHM
  std::string solver;
};

struct Spectrum {
  FrequencyGrid grid;
  std::vector<double> intensity;
  SpectrumMetadata metadata;

  // Riemann sum of intensity times the grid step.
  double area() const;
};

// Unit-area Lorentzian with full width at half maximum fwhm_hz.
double lorentzian(double offset_hz, double fwhm_hz);

// Grid covering every line with margin_fwhm * fwhm on both sides and a
// step of fwhm / points_per_fwhm.
FrequencyGrid auto_grid(const StickSpectrum& sticks, double fwhm_hz, double margin_fwhm = 50.0,
                        double points_per_fwhm = 16.0);

struct BroadenResult {
  Spectrum spectrum;
  std::vector<std::string> warnings;
};

// intensity(nu) = sum_lines Re[a] L(nu - nu_line; fwhm). Lines outside the
// grid carrying more than 0.1% of the total |Re a| raise a warning, or a
// ValidityError when strict.
BroadenResult broaden(const StickSpectrum& sticks, const FrequencyGrid& grid, double fwhm_hz,
                      bool strict = false);

// Discrete Fourier transform of the FID approximating the one-sided
// integral int_0^inf s(t) e^{-i 2pi f t} dt: the first point is halved and
// the sum is scaled by the dwell. Bins are ordered from -bandwidth/2 upward.
// Non power-of-two lengths are zero-filled.
std::vector<cplx> fourier_transform(const Fid& fid);

// Frequency axis of fourier_transform for an FID of n points (after zero-fill).
FrequencyGrid fft_grid(double dwell, std::size_t n_points);

// Absorption spectrum 2 Re[fourier_transform(fid)], which matches broaden()
// for matched linewidth up to discretization and aliasing.
Spectrum fft_spectrum(const Fid& fid);

struct Peak {
  double hz = 0.0;
  double height = 0.0;
  double area = 0.0;
};

// Local maxima above min_height_fraction * max intensity. Areas integrate
// (trapezoid rule) between the flanking local minima.
std::vector<Peak> peak_table(const Spectrum& spectrum, double min_height_fraction);

}  // namespace magsim
