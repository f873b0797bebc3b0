#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "magsim/spectrum.hpp"
#include "magsim/spin_system.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

struct CouplingEdge {
  std::size_t k = 0, l = 0;  // k < l
  double weight = 0.0;
};

// Spins as nodes, nonzero couplings as edges weighted by
// |J_kl| / max(1 Hz, |nu_k - nu_l|): coupling strength relative to the
// resonance frequency difference.
class CouplingGraph {
 public:
  explicit CouplingGraph(const SpinSystem& system);

  std::size_t size() const { return weights_.rows(); }
  const std::vector<CouplingEdge>& edges() const { return edges_; }
  double weight(std::size_t k, std::size_t l) const { return weights_(k, l); }

 private:
  Eigen::MatrixXd weights_;
  std::vector<CouplingEdge> edges_;
};

// Overlapping clusters; each spin is the home spin of exactly one cluster
// and contributes detected signal only from there.
struct ClusterPartition {
  std::vector<std::vector<std::size_t>> clusters;  // members, ascending
  std::vector<std::size_t> home_of;                // spin -> cluster index

  std::vector<std::size_t> homes(std::size_t cluster) const;
  std::size_t largest_cluster() const;
};

// For every spin, grows its home cluster greedily: first its direct
// neighbours in descending edge weight, then (while room remains) the outside
// spin with the strongest edge into the cluster. Candidates below
// weight_threshold or with zero weight are never added; ties go to the lower
// spin index. Clusters with identical member sets are merged.
ClusterPartition build_partition(const SpinSystem& system, std::size_t max_cluster_size,
                                 double weight_threshold);

// Solves every cluster exactly (intra-cluster couplings only), detecting on
// the cluster's home spins of detect_isotope, and concatenates the lines.
// Throws CapacityError for clusters above kMaxExactSpins.
StickSpectrum simulate_clusters(const SpinSystem& system, const ClusterPartition& partition,
                                const ReferenceFrame& frame, std::string_view detect_isotope);

// L1 distance between the two spectra after scaling each to unit absolute
// area; lies in [0, 2]. Throws std::invalid_argument on grid mismatch.
double spectrum_distance(const Spectrum& a, const Spectrum& b);

struct ConvergenceRow {
  std::size_t max_cluster_size = 0;
  std::size_t largest_cluster = 0;
  double distance_to_previous = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::vector<Spectrum> spectra;  // one per size, common grid
};

// Spectra for increasing cluster sizes on one grid. The first row is
// compared with the uncoupled (size-1) spectrum.
ConvergenceStudy convergence_study(const SpinSystem& system, const std::vector<std::size_t>& sizes,
                                   double weight_threshold, const ReferenceFrame& frame,
                                   std::string_view detect_isotope, double fwhm_hz);

}  // namespace magsim
