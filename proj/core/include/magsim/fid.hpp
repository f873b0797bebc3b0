#pragma once

#include <cstddef>
#include <vector>

#include "magsim/eigen_system.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

// Free induction decay sampled on t_n = n * dwell.
struct Fid {
  double dwell = 0.0;  // s
  std::vector<cplx> signal;

  std::vector<double> times() const;
};

// signal(t) = sum_lines a exp((i 2pi nu - pi linewidth) t).
Fid fid_from_sticks(const StickSpectrum& sticks, double dwell, std::size_t n_points,
                    double linewidth_hz);

// Time-domain route: Tr[detect exp(-iHt) rho0 exp(iHt)] on the same grid,
// evaluated by propagating rho0 step by step.
std::vector<cplx> correlation_signal(const EigenSystem& eigen, const Eigen::MatrixXcd& detect,
                                     const Eigen::MatrixXcd& rho0, double dwell,
                                     std::size_t n_points);

}  // namespace magsim
