#include "magsim/exact_solver.hpp"

#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "magsim/errors.hpp"

namespace magsim {

Detection detection_operators(const ProductSpace& space, std::span<const std::size_t> detected,
                              std::span<const std::size_t> excited) {
  return {collective_operator(space, Axis::kPlus, detected),
          collective_operator(space, Axis::kY, excited)};
}

void normalize_to_spin_count(StickSpectrum& sticks, double dimension) {
  const cplx scale = 1.0 / cplx(0.0, dimension / 4.0);
  for (auto& l : sticks.lines) l.amplitude *= scale;
}

StickSpectrum simulate_exact(const SpinSystem& system, const ReferenceFrame& frame,
                             std::string_view detect_isotope) {
  if (system.size() > kMaxExactSpins) {
    const std::size_t dim = system.size() < 63 ? (std::size_t{1} << system.size()) : 0;
    throw CapacityError(fmt::format("exact solver capacity exceeded: {} spins, Hilbert dimension "
                                    "2^{} = {} (limit 2^{})",
                                    system.size(), system.size(), dim, kMaxExactSpins),
                        dim);
  }
  const auto detected = spins_of_isotope(system, detect_isotope);
  if (detected.empty()) {
    throw std::invalid_argument("no spins of detected isotope " + std::string(detect_isotope));
  }
  const SiteModel model = site_model(system, frame);
  const ProductSpace space = model.space();
  const EigenSystem eigen = eigendecompose(site_model_hamiltonian(model));
  const Detection ops = detection_operators(space, detected, detected);
  StickSpectrum sticks = stick_spectrum(eigen, ops.detect, ops.excite);
  sticks.detected_isotope = std::string(detect_isotope);
  normalize_to_spin_count(sticks, static_cast<double>(space.dimension()));
  return merge_degenerate(sticks, kMergeToleranceHz);
}

}  // namespace magsim
