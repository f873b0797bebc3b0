#include "magsim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "magsim/errors.hpp"
#include "magsim/exact_solver.hpp"
#include "magsim/hamiltonian.hpp"
#include "magsim/parallel.hpp"

namespace magsim {
namespace {

// Resonance frequency difference in Hz. Same-isotope pairs use the shift
// difference directly so equal spacings give bit-identical weights.
double frequency_gap_hz(const SpinSystem& system, std::size_t k, std::size_t l) {
  const Spin& a = system.spin(k);
  const Spin& b = system.spin(l);
  if (a.isotope.symbol == b.isotope.symbol) {
    return std::abs(a.shift_ppm - b.shift_ppm) * 1e-6 *
           larmor_frequency_hz(a.isotope, system.field_tesla());
  }
  return std::abs(lab_frequency_hz(a, system.field_tesla()) - lab_frequency_hz(b, system.field_tesla()));
}

// Heaviest candidate first, lower index on ties.
bool candidate_before(double wa, std::size_t a, double wb, std::size_t b) {
  if (wa != wb) return wa > wb;
  return a < b;
}

}  // namespace

CouplingGraph::CouplingGraph(const SpinSystem& system)
    : weights_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(system.size()),
                                     static_cast<Eigen::Index>(system.size()))) {
  for (std::size_t k = 0; k < system.size(); ++k) {
    for (std::size_t l = k + 1; l < system.size(); ++l) {
      const double j = system.coupling_hz(k, l);
      if (j == 0.0) continue;
      const double w = std::abs(j) / std::max(1.0, frequency_gap_hz(system, k, l));
      weights_(k, l) = weights_(l, k) = w;
      edges_.push_back({k, l, w});
    }
  }
}

std::vector<std::size_t> ClusterPartition::homes(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < home_of.size(); ++k) {
    if (home_of[k] == cluster) out.push_back(k);
  }
  return out;
}

std::size_t ClusterPartition::largest_cluster() const {
  std::size_t out = 0;
  for (const auto& c : clusters) out = std::max(out, c.size());
  return out;
}

ClusterPartition build_partition(const SpinSystem& system, std::size_t max_cluster_size,
                                 double weight_threshold) {
  if (max_cluster_size < 1) throw std::invalid_argument("max_cluster_size must be at least 1");
  const CouplingGraph graph(system);
  const std::size_t n = system.size();
  auto admissible = [&](double w) { return w > 0.0 && w >= weight_threshold; };

  ClusterPartition partition;
  partition.home_of.resize(n);
  std::map<std::vector<std::size_t>, std::size_t> index_of;

  for (std::size_t home = 0; home < n; ++home) {
    std::vector<bool> member(n, false);
    member[home] = true;
    std::size_t size = 1;

    // Phase 1: direct neighbours of the home spin.
    std::vector<std::size_t> neighbours;
    for (std::size_t l = 0; l < n; ++l) {
      if (l != home && admissible(graph.weight(home, l))) neighbours.push_back(l);
    }
    std::sort(neighbours.begin(), neighbours.end(), [&](std::size_t a, std::size_t b) {
      return candidate_before(graph.weight(home, a), a, graph.weight(home, b), b);
    });
    for (std::size_t l : neighbours) {
      if (size >= max_cluster_size) break;
      member[l] = true;
      ++size;
    }

    // Phase 2: frontier growth through the strongest edge into the cluster.
    while (size < max_cluster_size) {
      std::size_t best = n;
      double best_w = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (member[c]) continue;
        double w = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          if (member[m]) w = std::max(w, graph.weight(m, c));
        }
        if (!admissible(w)) continue;
        if (best == n || candidate_before(w, c, best_w, best)) {
          best = c;
          best_w = w;
        }
      }
      if (best == n) break;
      member[best] = true;
      ++size;
    }

    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < n; ++k) {
      if (member[k]) members.push_back(k);
    }
    auto [it, inserted] = index_of.emplace(members, partition.clusters.size());
    if (inserted) partition.clusters.push_back(std::move(members));
    partition.home_of[home] = it->second;
  }
  return partition;
}

StickSpectrum simulate_clusters(const SpinSystem& system, const ClusterPartition& partition,
                                const ReferenceFrame& frame, std::string_view detect_isotope) {
  if (partition.home_of.size() != system.size()) {
    throw std::invalid_argument("partition does not match the spin system");
  }
  for (const auto& c : partition.clusters) {
    if (c.size() > kMaxExactSpins) {
      const std::size_t dim = c.size() < 63 ? (std::size_t{1} << c.size()) : 0;
      throw CapacityError(fmt::format("cluster of {} spins exceeds the exact-solver capacity of {} "
                                      "spins (dimension {})",
                                      c.size(), kMaxExactSpins, dim),
                          dim);
    }
  }

  std::vector<StickSpectrum> parts(partition.clusters.size());
  parallel_for(partition.clusters.size(), [&](std::size_t c) {
    const auto& members = partition.clusters[c];
    const SpinSystem sub = system.subsystem(members);
    std::vector<std::size_t> detected, excited;
    for (std::size_t a = 0; a < members.size(); ++a) {
      if (sub.spin(a).isotope.symbol != detect_isotope) continue;
      excited.push_back(a);
      if (partition.home_of[members[a]] == c) detected.push_back(a);
    }
    if (detected.empty()) return;
    const SiteModel model = site_model(sub, frame);
    const ProductSpace space = model.space();
    const EigenSystem eigen = eigendecompose(site_model_hamiltonian(model));
    const Detection ops = detection_operators(space, detected, excited);
    parts[c] = stick_spectrum(eigen, ops.detect, ops.excite);
    normalize_to_spin_count(parts[c], static_cast<double>(space.dimension()));
  });

  StickSpectrum all = concatenate(parts);
  all.detected_isotope = std::string(detect_isotope);
  return merge_degenerate(all, kMergeToleranceHz);
}

double spectrum_distance(const Spectrum& a, const Spectrum& b) {
  if (!(a.grid == b.grid) || a.intensity.size() != b.intensity.size()) {
    throw std::invalid_argument("spectrum_distance: frequency grids differ");
  }
  double na = 0.0, nb = 0.0;
  for (double v : a.intensity) na += std::abs(v);
  for (double v : b.intensity) nb += std::abs(v);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("spectrum_distance: zero spectrum");
  double d = 0.0;
  for (std::size_t i = 0; i < a.intensity.size(); ++i) {
    d += std::abs(a.intensity[i] / na - b.intensity[i] / nb);
  }
  return d;
}

ConvergenceStudy convergence_study(const SpinSystem& system, const std::vector<std::size_t>& sizes,
                                   double weight_threshold, const ReferenceFrame& frame,
                                   std::string_view detect_isotope, double fwhm_hz) {
  if (sizes.empty()) throw std::invalid_argument("convergence study needs at least one size");
  std::vector<std::size_t> all_sizes{1};
  all_sizes.insert(all_sizes.end(), sizes.begin(), sizes.end());

  std::vector<StickSpectrum> sticks;
  std::vector<std::size_t> largest;
  for (std::size_t size : all_sizes) {
    const ClusterPartition p = build_partition(system, size, weight_threshold);
    largest.push_back(p.largest_cluster());
    sticks.push_back(simulate_clusters(system, p, frame, detect_isotope));
  }
  const FrequencyGrid grid = auto_grid(concatenate(sticks), fwhm_hz);

  ConvergenceStudy study;
  std::vector<Spectrum> spectra;
  for (const auto& s : sticks) spectra.push_back(broaden(s, grid, fwhm_hz).spectrum);
  for (std::size_t i = 1; i < all_sizes.size(); ++i) {
    study.rows.push_back({all_sizes[i], largest[i], spectrum_distance(spectra[i - 1], spectra[i])});
    study.spectra.push_back(spectra[i]);
  }
  return study;
}

}  // namespace magsim
