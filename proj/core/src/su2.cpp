#include "magsim/su2.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "magsim/errors.hpp"
#include "magsim/exact_solver.hpp"
#include "magsim/hamiltonian.hpp"
#include "magsim/parallel.hpp"

namespace magsim {
namespace {

bool same_couplings_outside(const SpinSystem& system, const std::vector<bool>& inside,
                            std::size_t a, std::size_t b, double tol_hz, std::size_t* witness) {
  for (std::size_t c = 0; c < system.size(); ++c) {
    if (inside[c] || c == a || c == b) continue;
    if (std::abs(system.coupling_hz(a, c) - system.coupling_hz(b, c)) > tol_hz) {
      if (witness) *witness = c;
      return false;
    }
  }
  return true;
}

EquivalenceGroup finish_group(const SpinSystem& system, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  double shift = 0.0;
  for (std::size_t k : members) shift += system.spin(k).shift_ppm;
  return {members, system.spin(members.front()).isotope.symbol,
          shift / static_cast<double>(members.size())};
}

}  // namespace

std::uint64_t MultipletDecomposition::dimension() const {
  std::uint64_t d = 0;
  for (const auto& s : sectors) d += s.multiplicity * static_cast<std::uint64_t>(s.twice_j + 1);
  return d;
}

MultipletDecomposition decompose_group(std::size_t n) {
  if (n < 1) throw std::invalid_argument("group size must be at least 1");
  if (n > 60) throw std::invalid_argument("group size too large for 64-bit multiplicities");
  // mult[t] = multiplicity of twice_j == t for the current number of spins.
  std::vector<std::uint64_t> mult(n + 2, 0);
  mult[1] = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    std::vector<std::uint64_t> next(n + 2, 0);
    for (std::size_t t = 0; t <= k; ++t) {
      if ((t + k) % 2 != 0) continue;
      std::uint64_t m = 0;
      if (t >= 1) m += mult[t - 1];  // j - 1/2 coupled up
      m += mult[t + 1];              // j + 1/2 coupled down
      next[t] = m;
    }
    mult = std::move(next);
  }
  MultipletDecomposition out;
  out.group_size = n;
  for (std::size_t t = n + 1; t-- > 0;) {
    if (mult[t] != 0) out.sectors.push_back({static_cast<int>(t), mult[t]});
  }
  return out;
}

std::vector<EquivalenceGroup> detect_equivalence_groups(const SpinSystem& system,
                                                        EquivalenceTolerance tolerance) {
  if (tolerance.ppm < 0.0 || tolerance.hz < 0.0) {
    throw std::invalid_argument("equivalence tolerances must be non-negative");
  }
  const std::size_t n = system.size();
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < n; ++s) {
    bool placed = false;
    for (auto& g : groups) {
      const Spin& head = system.spin(g.front());
      if (head.isotope.symbol != system.spin(s).isotope.symbol) continue;
      std::vector<bool> inside(n, false);
      for (std::size_t m : g) inside[m] = true;
      inside[s] = true;
      bool ok = true;
      for (std::size_t m : g) {
        if (std::abs(system.spin(m).shift_ppm - system.spin(s).shift_ppm) > tolerance.ppm ||
            !same_couplings_outside(system, inside, m, s, tolerance.hz, nullptr)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        g.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({s});
  }
  std::vector<EquivalenceGroup> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(finish_group(system, std::move(g)));
  return out;
}

std::vector<EquivalenceGroup> make_equivalence_groups(
    const SpinSystem& system, const std::vector<std::vector<std::size_t>>& indices,
    EquivalenceTolerance tolerance) {
  const std::size_t n = system.size();
  std::vector<int> owner(n, -1);
  std::vector<EquivalenceGroup> out;
  for (std::size_t gi = 0; gi < indices.size(); ++gi) {
    const auto& g = indices[gi];
    if (g.empty()) throw std::invalid_argument(fmt::format("equivalence group {} is empty", gi));
    for (std::size_t k : g) {
      if (k >= n) throw std::invalid_argument(fmt::format("equivalence group {}: spin index {} out of range", gi, k));
      if (owner[k] >= 0) {
        throw std::invalid_argument(
            fmt::format("spin {} appears in equivalence groups {} and {}", k, owner[k], gi));
      }
      owner[k] = static_cast<int>(gi);
    }
  }
  for (std::size_t gi = 0; gi < indices.size(); ++gi) {
    const auto& g = indices[gi];
    std::vector<bool> inside(n, false);
    for (std::size_t k : g) inside[k] = true;
    const std::size_t a = g.front();
    for (std::size_t b : g) {
      if (system.spin(b).isotope.symbol != system.spin(a).isotope.symbol) {
        throw std::invalid_argument(fmt::format("equivalence group {}: spins {} and {} differ in isotope", gi, a, b));
      }
      if (std::abs(system.spin(b).shift_ppm - system.spin(a).shift_ppm) > tolerance.ppm) {
        throw std::invalid_argument(fmt::format("equivalence group {}: spins {} and {} differ in shift", gi, a, b));
      }
      std::size_t c = 0;
      if (!same_couplings_outside(system, inside, a, b, tolerance.hz, &c)) {
        throw std::invalid_argument(fmt::format(
            "equivalence group {}: spins {} and {} couple differently to spin {}", gi, a, b, c));
      }
    }
    out.push_back(finish_group(system, g));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (owner[k] < 0) out.push_back(finish_group(system, {k}));
  }
  std::sort(out.begin(), out.end(), [](const EquivalenceGroup& x, const EquivalenceGroup& y) {
    return x.members.front() < y.members.front();
  });
  return out;
}

std::uint64_t symmetric_dimension(const SpinSystem& system,
                                  const std::vector<EquivalenceGroup>& groups) {
  std::uint64_t dim = 1;
  std::size_t grouped = 0;
  for (const auto& g : groups) {
    if (g.members.size() < 2) continue;
    grouped += g.members.size();
    dim *= decompose_group(g.members.size()).dimension();
  }
  if (grouped > system.size()) throw std::invalid_argument("groups cover more spins than the system has");
  return dim << (system.size() - grouped);
}

SymmetricSolution simulate_symmetric(const SpinSystem& system,
                                     const std::vector<EquivalenceGroup>& groups,
                                     const ReferenceFrame& frame, std::string_view detect_isotope,
                                     EquivalenceTolerance tolerance) {
  // Revalidate: the composite-spin reduction is exact only for true groups.
  std::vector<std::vector<std::size_t>> lists;
  for (const auto& g : groups) lists.push_back(g.members);
  const std::vector<EquivalenceGroup> checked = make_equivalence_groups(system, lists, tolerance);

  // Site layout: one site per group (spin-j for multi-spin groups).
  const std::size_t n_sites = checked.size();
  std::vector<std::size_t> composite;  // indices of multi-spin groups
  std::vector<MultipletDecomposition> decompositions;
  for (std::size_t s = 0; s < n_sites; ++s) {
    if (checked[s].members.size() > 1) {
      composite.push_back(s);
      decompositions.push_back(decompose_group(checked[s].members.size()));
    }
  }

  SiteModel base;
  base.sites.resize(n_sites);
  base.j_hz = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_sites), static_cast<Eigen::Index>(n_sites));
  for (std::size_t s = 0; s < n_sites; ++s) {
    const auto& g = checked[s];
    double offset = 0.0;
    for (std::size_t k : g.members) offset += offset_hz(system, frame, k);
    base.sites[s] = {1, g.isotope, offset / static_cast<double>(g.members.size())};
    for (std::size_t t = 0; t < n_sites; ++t) {
      if (t == s) continue;
      double j = 0.0;
      for (std::size_t a : g.members) {
        for (std::size_t b : checked[t].members) j += system.coupling_hz(a, b);
      }
      base.j_hz(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) =
          j / static_cast<double>(g.members.size() * checked[t].members.size());
    }
  }
  const std::vector<std::size_t> detected = base.sites_of_isotope(detect_isotope);
  if (detected.empty()) {
    throw std::invalid_argument("no spins of detected isotope " + std::string(detect_isotope));
  }

  // Cartesian product of sectors.
  std::vector<std::vector<std::size_t>> combos{{}};
  for (const auto& dec : decompositions) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& c : combos) {
      for (std::size_t i = 0; i < dec.sectors.size(); ++i) {
        auto e = c;
        e.push_back(i);
        next.push_back(std::move(e));
      }
    }
    combos = std::move(next);
  }

  SymmetricSolution out;
  out.sectors = combos.size();
  std::vector<SiteModel> models(combos.size(), base);
  std::vector<double> weights(combos.size(), 1.0);
  for (std::size_t c = 0; c < combos.size(); ++c) {
    std::uint64_t dim = 1;
    for (std::size_t gi = 0; gi < composite.size(); ++gi) {
      const Multiplet& m = decompositions[gi].sectors[combos[c][gi]];
      models[c].sites[composite[gi]].twice_spin = m.twice_j;
      weights[c] *= static_cast<double>(m.multiplicity);
    }
    for (const auto& site : models[c].sites) dim *= static_cast<std::uint64_t>(site.twice_spin + 1);
    if (dim > static_cast<std::uint64_t>(kMaxExactDimension)) {
      throw CapacityError(fmt::format("symmetry sector block of dimension {} exceeds the dense "
                                      "capacity {}",
                                      dim, kMaxExactDimension),
                          static_cast<std::size_t>(dim));
    }
    out.largest_block = std::max(out.largest_block, static_cast<std::size_t>(dim));
  }

  std::vector<StickSpectrum> parts(combos.size());
  std::vector<std::size_t> subspace(combos.size(), 0);
  parallel_for(combos.size(), [&](std::size_t c) {
    const SiteModel& model = models[c];
    const ProductSpace space = model.space();
    const EigenSystem eigen = eigendecompose(site_model_hamiltonian(model));
    subspace[c] = eigen.largest_block();
    const Detection ops = detection_operators(space, detected, detected);
    parts[c] = stick_spectrum(eigen, ops.detect, ops.excite);
    for (auto& l : parts[c].lines) l.amplitude *= weights[c];
  });
  for (std::size_t s : subspace) out.largest_subspace = std::max(out.largest_subspace, s);

  out.sticks = concatenate(parts);
  out.sticks.detected_isotope = std::string(detect_isotope);
  normalize_to_spin_count(out.sticks, std::ldexp(1.0, static_cast<int>(system.size())));
  out.sticks = merge_degenerate(out.sticks, kMergeToleranceHz);
  return out;
}

}  // namespace magsim
