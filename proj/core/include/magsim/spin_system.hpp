#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magsim/isotope.hpp"

namespace magsim {

struct Spin {
  Isotope isotope;
  double shift_ppm = 0.0;
};

// Full problem definition of a liquid-state NMR spin system: isotopes,
// chemical shifts, scalar couplings and the static field. Immutable once
// constructed; the constructor enforces the invariants (symmetric J with a
// zero diagonal, positive field, at least one spin).
class SpinSystem {
 public:
  SpinSystem(std::vector<Spin> spins, Eigen::MatrixXd j_hz, double field_tesla);

  std::size_t size() const { return spins_.size(); }
  const std::vector<Spin>& spins() const { return spins_; }
  const Spin& spin(std::size_t k) const { return spins_.at(k); }
  double coupling_hz(std::size_t k, std::size_t l) const { return j_(k, l); }
  const Eigen::MatrixXd& couplings_hz() const { return j_; }
  double field_tesla() const { return field_; }

  // Distinct isotope symbols in order of first appearance.
  std::vector<std::string> isotope_symbols() const;

  // Restriction to the listed spins (in the given order), keeping only the
  // couplings among them.
  SpinSystem subsystem(std::span<const std::size_t> indices) const;

 private:
  std::vector<Spin> spins_;
  Eigen::MatrixXd j_;
  double field_;
};

// Rotating-frame carrier frequency for every isotope of a system.
class ReferenceFrame {
 public:
  ReferenceFrame() = default;

  // Carriers at the bare Larmor frequency |gamma| B / 2pi of each isotope,
  // so that offsets equal shift_ppm * carrier * 1e-6.
  static ReferenceFrame larmor(const SpinSystem& system);

  void set_carrier(std::string isotope, double carrier_hz);
  bool contains(std::string_view isotope) const;
  // Throws std::invalid_argument if the isotope has no carrier.
  double carrier_hz(std::string_view isotope) const;
  const std::map<std::string, double, std::less<>>& carriers() const { return carriers_; }

 private:
  std::map<std::string, double, std::less<>> carriers_;
};

// |gamma| B (1 + delta 1e-6) / 2pi.
double lab_frequency_hz(const Spin& spin, double field_tesla);

// Resonance offset of spin k from its isotope's carrier. Positive shifts give
// positive offsets.
double offset_hz(const SpinSystem& system, const ReferenceFrame& frame, std::size_t k);

}  // namespace magsim
