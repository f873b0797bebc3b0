#include "magsim/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace magsim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double raise_coefficient(double spin, double m) {
  return std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
}

}  // namespace

ProductSpace SiteModel::space() const {
  std::vector<int> twice;
  twice.reserve(sites.size());
  for (const auto& s : sites) twice.push_back(s.twice_spin);
  return ProductSpace(std::move(twice));
}

std::vector<std::size_t> SiteModel::sites_of_isotope(std::string_view isotope) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (sites[k].isotope == isotope) out.push_back(k);
  }
  return out;
}

SiteModel site_model(const SpinSystem& system, const ReferenceFrame& frame) {
  SiteModel model;
  model.sites.reserve(system.size());
  for (std::size_t k = 0; k < system.size(); ++k) {
    model.sites.push_back({1, system.spin(k).isotope.symbol, offset_hz(system, frame, k)});
  }
  model.j_hz = system.couplings_hz();
  return model;
}

SpinOperator site_model_hamiltonian(const SiteModel& model) {
  const std::size_t n = model.sites.size();
  const auto ni = static_cast<Eigen::Index>(n);
  if (model.j_hz.rows() != ni || model.j_hz.cols() != ni) {
    throw std::invalid_argument("site model coupling matrix has wrong shape");
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double a = model.j_hz(k, l), b = model.j_hz(l, k);
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw std::invalid_argument(fmt::format("non-symmetric J between sites {} and {}", k, l));
      }
    }
  }

  struct Pair {
    std::size_t k, l;
    double coupling;  // 2 pi J
    bool isotropic;
  };
  std::vector<Pair> pairs;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double j = model.j_hz(k, l);
      if (j == 0.0) continue;
      pairs.push_back({k, l, kTwoPi * j, model.sites[k].isotope == model.sites[l].isotope});
    }
  }

  const ProductSpace space = model.space();
  const Eigen::Index dim = space.dimension();
  std::vector<Eigen::Triplet<cplx, Eigen::Index>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * (1 + pairs.size()));

  for (Eigen::Index s = 0; s < dim; ++s) {
    double diagonal = 0.0;
    for (std::size_t k = 0; k < n; ++k) diagonal += kTwoPi * model.sites[k].offset_hz * space.m(s, k);
    for (const Pair& p : pairs) {
      const double mk = space.m(s, p.k), ml = space.m(s, p.l);
      diagonal += p.coupling * mk * ml;
      if (!p.isotropic) continue;
      const double sk = 0.5 * space.twice_spin(p.k), sl = 0.5 * space.twice_spin(p.l);
      // (1/2)(S+_k S-_l + S-_k S+_l) flip-flop terms.
      if (mk < sk && ml > -sl) {
        const double c = 0.5 * p.coupling * raise_coefficient(sk, mk) * raise_coefficient(sl, ml - 1.0);
        triplets.emplace_back(s - space.stride(p.k) + space.stride(p.l), s, c);
      }
      if (mk > -sk && ml < sl) {
        const double c = 0.5 * p.coupling * raise_coefficient(sk, mk - 1.0) * raise_coefficient(sl, ml);
        triplets.emplace_back(s + space.stride(p.k) - space.stride(p.l), s, c);
      }
    }
    if (diagonal != 0.0) triplets.emplace_back(s, s, diagonal);
  }
  SparseMatrix h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return SpinOperator(std::move(h));
}

SpinOperator build_hamiltonian(const SpinSystem& system, const ReferenceFrame& frame) {
  return site_model_hamiltonian(site_model(system, frame));
}

SpinOperator collective_operator(const SpinSystem& system, Axis axis,
                                 std::optional<std::span<const std::size_t>> subset) {
  const ProductSpace space = ProductSpace::spin_half(system.size());
  if (subset) return collective_operator(space, axis, *subset);
  std::vector<std::size_t> all(system.size());
  std::iota(all.begin(), all.end(), 0);
  return collective_operator(space, axis, all);
}

std::vector<std::size_t> spins_of_isotope(const SpinSystem& system, std::string_view isotope) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < system.size(); ++k) {
    if (system.spin(k).isotope.symbol == isotope) out.push_back(k);
  }
  return out;
}

}  // namespace magsim
