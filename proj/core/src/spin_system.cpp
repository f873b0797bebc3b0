#include "magsim/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace magsim {

SpinSystem::SpinSystem(std::vector<Spin> spins, Eigen::MatrixXd j_hz, double field_tesla)
    : spins_(std::move(spins)), j_(std::move(j_hz)), field_(field_tesla) {
  const auto n = static_cast<Eigen::Index>(spins_.size());
  if (n < 1) throw std::invalid_argument("spin system needs at least one spin");
  if (!(field_ > 0.0) || !std::isfinite(field_)) {
    throw std::invalid_argument(fmt::format("field must be positive, got {}", field_));
  }
  if (j_.rows() != n || j_.cols() != n) {
    throw std::invalid_argument(
        fmt::format("J matrix is {}x{} but the system has {} spins", j_.rows(), j_.cols(), n));
  }
  for (const auto& s : spins_) {
    if (s.isotope.spin != 0.5) {
      throw std::invalid_argument("only spin-1/2 isotopes are supported (" + s.isotope.symbol + ")");
    }
    if (s.isotope.gyromagnetic_ratio == 0.0) {
      throw std::invalid_argument("isotope " + s.isotope.symbol + " has zero gyromagnetic ratio");
    }
    if (!std::isfinite(s.shift_ppm)) throw std::invalid_argument("non-finite chemical shift");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (j_(k, k) != 0.0) {
      throw std::invalid_argument(fmt::format("J[{0}][{0}] must be zero, got {1}", k, j_(k, k)));
    }
    for (Eigen::Index l = k + 1; l < n; ++l) {
      const double a = j_(k, l), b = j_(l, k);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument(fmt::format("non-finite J between spins {} and {}", k, l));
      }
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw std::invalid_argument(
            fmt::format("asymmetric J coupling between spins {} and {}: {} vs {}", k, l, a, b));
      }
    }
  }
}

std::vector<std::string> SpinSystem::isotope_symbols() const {
  std::vector<std::string> out;
  for (const auto& s : spins_) {
    if (std::find(out.begin(), out.end(), s.isotope.symbol) == out.end()) {
      out.push_back(s.isotope.symbol);
    }
  }
  return out;
}

SpinSystem SpinSystem::subsystem(std::span<const std::size_t> indices) const {
  std::vector<Spin> spins;
  spins.reserve(indices.size());
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto ka = static_cast<Eigen::Index>(indices[a]);
    if (indices[a] >= size()) {
      throw std::out_of_range(fmt::format("spin index {} out of range", indices[a]));
    }
    spins.push_back(spins_[indices[a]]);
    for (Eigen::Index b = 0; b < m; ++b) {
      if (a != b) j(a, b) = j_(ka, static_cast<Eigen::Index>(indices[b]));
    }
  }
  return SpinSystem(std::move(spins), std::move(j), field_);
}

ReferenceFrame ReferenceFrame::larmor(const SpinSystem& system) {
  ReferenceFrame frame;
  for (const auto& s : system.spins()) {
    if (!frame.contains(s.isotope.symbol)) {
      frame.set_carrier(s.isotope.symbol, larmor_frequency_hz(s.isotope, system.field_tesla()));
    }
  }
  return frame;
}

void ReferenceFrame::set_carrier(std::string isotope, double carrier_hz) {
  carriers_[std::move(isotope)] = carrier_hz;
}

bool ReferenceFrame::contains(std::string_view isotope) const {
  return carriers_.find(isotope) != carriers_.end();
}

double ReferenceFrame::carrier_hz(std::string_view isotope) const {
  const auto it = carriers_.find(isotope);
  if (it == carriers_.end()) {
    throw std::invalid_argument("reference frame has no carrier for isotope " + std::string(isotope));
  }
  return it->second;
}

double lab_frequency_hz(const Spin& spin, double field_tesla) {
  return larmor_frequency_hz(spin.isotope, field_tesla) * (1.0 + spin.shift_ppm * 1e-6);
}

double offset_hz(const SpinSystem& system, const ReferenceFrame& frame, std::size_t k) {
  const Spin& s = system.spin(k);
  const double larmor = larmor_frequency_hz(s.isotope, system.field_tesla());
  // Grouped to avoid cancellation between two ~1e8 Hz numbers.
  return larmor * s.shift_ppm * 1e-6 + (larmor - frame.carrier_hz(s.isotope.symbol));
}

}  // namespace magsim
