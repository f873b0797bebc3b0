#include "magsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>
#include <fmt/format.h>

#include "magsim/errors.hpp"
#include "magsim/parallel.hpp"

namespace magsim {
namespace {

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double Spectrum::area() const {
  double sum = 0.0;
  for (double v : intensity) sum += v;
  return sum * grid.step();
}

double lorentzian(double offset_hz, double fwhm_hz) {
  const double half = 0.5 * fwhm_hz;
  return half / (std::numbers::pi * (half * half + offset_hz * offset_hz));
}

FrequencyGrid auto_grid(const StickSpectrum& sticks, double fwhm_hz, double margin_fwhm,
                        double points_per_fwhm) {
  if (!(fwhm_hz > 0.0)) throw std::invalid_argument("fwhm must be positive");
  double lo = 0.0, hi = 0.0;
  if (!sticks.lines.empty()) {
    lo = hi = sticks.lines.front().hz;
    for (const auto& l : sticks.lines) {
      lo = std::min(lo, l.hz);
      hi = std::max(hi, l.hz);
    }
  }
  const double step = fwhm_hz / points_per_fwhm;
  const double start = std::floor((lo - margin_fwhm * fwhm_hz) / step) * step;
  const double stop = std::ceil((hi + margin_fwhm * fwhm_hz) / step) * step;
  const auto points = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  return {start, stop, points};
}

BroadenResult broaden(const StickSpectrum& sticks, const FrequencyGrid& grid, double fwhm_hz,
                      bool strict) {
  if (!(fwhm_hz > 0.0)) throw std::invalid_argument("fwhm must be positive");
  if (!(grid.stop_hz > grid.start_hz)) throw std::invalid_argument("grid stop must exceed start");
  if (grid.points < 2) throw std::invalid_argument("grid needs at least two points");

  BroadenResult out;
  double total = 0.0, outside = 0.0;
  for (const auto& l : sticks.lines) {
    const double w = std::abs(l.amplitude.real());
    total += w;
    if (l.hz < grid.start_hz || l.hz > grid.stop_hz) outside += w;
  }
  if (total > 0.0 && outside > 1e-3 * total) {
    const std::string msg = fmt::format(
        "grid [{:.3f}, {:.3f}] Hz excludes lines carrying {:.3f}% of the total amplitude",
        grid.start_hz, grid.stop_hz, 100.0 * outside / total);
    if (strict) throw ValidityError(msg);
    out.warnings.push_back(msg);
  }

  Spectrum& s = out.spectrum;
  s.grid = grid;
  s.metadata.broadening_hz = fwhm_hz;
  s.intensity.assign(grid.points, 0.0);
  const double half = 0.5 * fwhm_hz;
  const double half_sq = half * half;
  const double scale = half / std::numbers::pi;
  const double step = grid.step();

  // Grid points are independent; split them into fixed slabs.
  constexpr std::size_t kSlab = 512;
  const std::size_t slabs = (grid.points + kSlab - 1) / kSlab;
  parallel_for(slabs, [&](std::size_t b) {
    const std::size_t begin = b * kSlab;
    const std::size_t end = std::min(grid.points, begin + kSlab);
    for (const auto& l : sticks.lines) {
      const double a = l.amplitude.real() * scale;
      if (a == 0.0) continue;
      for (std::size_t i = begin; i < end; ++i) {
        const double d = grid.start_hz + step * static_cast<double>(i) - l.hz;
        s.intensity[i] += a / (half_sq + d * d);
      }
    }
  });
  return out;
}

FrequencyGrid fft_grid(double dwell, std::size_t n_points) {
  const std::size_t n = next_power_of_two(n_points);
  const double df = 1.0 / (static_cast<double>(n) * dwell);
  const double start = -static_cast<double>(n / 2) * df;
  return {start, start + df * static_cast<double>(n - 1), n};
}

std::vector<cplx> fourier_transform(const Fid& fid) {
  if (fid.signal.empty()) throw std::invalid_argument("empty FID");
  if (!(fid.dwell > 0.0)) throw std::invalid_argument("dwell must be positive");
  const std::size_t n = next_power_of_two(fid.signal.size());

  std::vector<cplx> in(n, cplx(0.0)), out(n);
  std::copy(fid.signal.begin(), fid.signal.end(), in.begin());
  in[0] *= 0.5;

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  // fftshift: bin k of the output holds frequency (k - n/2) df.
  std::vector<cplx> shifted(n);
  for (std::size_t k = 0; k < n; ++k) shifted[k] = fid.dwell * out[(k + n / 2) % n];
  return shifted;
}

Spectrum fft_spectrum(const Fid& fid) {
  const std::vector<cplx> bins = fourier_transform(fid);
  Spectrum s;
  s.grid = fft_grid(fid.dwell, fid.signal.size());
  s.intensity.resize(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) s.intensity[k] = 2.0 * bins[k].real();
  return s;
}

std::vector<Peak> peak_table(const Spectrum& spectrum, double min_height_fraction) {
  if (!(min_height_fraction > 0.0) || min_height_fraction > 1.0) {
    throw std::invalid_argument("min_height_fraction must lie in (0, 1]");
  }
  const auto& y = spectrum.intensity;
  std::vector<Peak> peaks;
  if (y.size() < 3) return peaks;
  const double top = *std::max_element(y.begin(), y.end());
  if (!(top > 0.0)) return peaks;
  const double threshold = min_height_fraction * top;
  const double step = spectrum.grid.step();

  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    // Plateaus count once, at their left edge.
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] < threshold) continue;
    std::size_t lo = i, hi = i;
    while (lo > 0 && y[lo - 1] <= y[lo]) --lo;
    while (hi + 1 < y.size() && y[hi + 1] <= y[hi]) ++hi;
    double area = 0.0;
    for (std::size_t k = lo; k < hi; ++k) area += 0.5 * (y[k] + y[k + 1]) * step;

    // Parabolic refinement of the maximum position.
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    const double shift = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
    peaks.push_back({spectrum.grid.at(i) + shift * step, y[i], area});
  }
  return peaks;
}

}  // namespace magsim
