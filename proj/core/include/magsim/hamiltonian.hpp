#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magsim/spin_operator.hpp"
#include "magsim/spin_system.hpp"

namespace magsim {

// A rotating-frame spin model whose sites may be spin-1/2 nuclei or
// composite spin-j degrees of freedom standing in for a group of equivalent
// nuclei. SpinSystem Hamiltonians and symmetry-sector blocks are both built
// from this description.
struct SpinSite {
  int twice_spin = 1;
  std::string isotope;
  double offset_hz = 0.0;
};

struct SiteModel {
  std::vector<SpinSite> sites;
  Eigen::MatrixXd j_hz;  // symmetric, zero diagonal

  ProductSpace space() const;
  std::vector<std::size_t> sites_of_isotope(std::string_view isotope) const;
};

SiteModel site_model(const SpinSystem& system, const ReferenceFrame& frame);

// H = sum_k 2 pi nu_k S^z_k + 2 pi sum_{k<l} J_kl C_kl, in rad/s, where
// C_kl = S_k . S_l for sites of one isotope and S^z_k S^z_l (weak-coupling
// truncation) for heteronuclear pairs.
SpinOperator site_model_hamiltonian(const SiteModel& model);

// Rotating-frame Hamiltonian of a spin system; throws std::invalid_argument
// if the frame lacks a carrier for one of its isotopes.
SpinOperator build_hamiltonian(const SpinSystem& system, const ReferenceFrame& frame);

// sum_{k in subset} I^axis_k; the whole system when subset is empty.
SpinOperator collective_operator(const SpinSystem& system, Axis axis,
                                 std::optional<std::span<const std::size_t>> subset = std::nullopt);

std::vector<std::size_t> spins_of_isotope(const SpinSystem& system, std::string_view isotope);

}  // namespace magsim
