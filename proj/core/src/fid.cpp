#include "magsim/fid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magsim {

std::vector<double> Fid::times() const {
  std::vector<double> t(signal.size());
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = static_cast<double>(n) * dwell;
  return t;
}

Fid fid_from_sticks(const StickSpectrum& sticks, double dwell, std::size_t n_points,
                    double linewidth_hz) {
  if (!(dwell > 0.0)) throw std::invalid_argument("dwell must be positive");
  if (linewidth_hz < 0.0) throw std::invalid_argument("linewidth must be non-negative");
  Fid fid;
  fid.dwell = dwell;
  fid.signal.assign(n_points, cplx(0.0));
  for (const auto& line : sticks.lines) {
    // Direct evaluation per point; a running product would accumulate phase error.
    const cplx rate(-std::numbers::pi * linewidth_hz, 2.0 * std::numbers::pi * line.hz);
    for (std::size_t n = 0; n < n_points; ++n) {
      fid.signal[n] += line.amplitude * std::exp(rate * (static_cast<double>(n) * dwell));
    }
  }
  return fid;
}

std::vector<cplx> correlation_signal(const EigenSystem& eigen, const Eigen::MatrixXcd& detect,
                                     const Eigen::MatrixXcd& rho0, double dwell,
                                     std::size_t n_points) {
  const Eigen::MatrixXcd step = eigen.propagator(dwell);
  Eigen::MatrixXcd rho = rho0;
  std::vector<cplx> out(n_points);
  for (std::size_t n = 0; n < n_points; ++n) {
    out[n] = (detect * rho).trace();
    rho = step * rho * step.adjoint();
  }
  return out;
}

}  // namespace magsim
