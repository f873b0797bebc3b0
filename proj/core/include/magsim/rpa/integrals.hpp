#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

namespace magsim::rpa {

// Molecular-orbital integrals of a two-electron-in-two-orbital problem with
// an environment. Orbitals 0 and 1 (1 and 2 in files) form the active pair;
// every other orbital is environment and is either doubly occupied or empty.
//
// Two-electron integrals use the chemist convention h(p,s,q,r) = (ps|qr), so
// the interaction reads 1/2 sum h_psqr c+_p c+_q c_r c_s.
class IntegralSet {
 public:
  IntegralSet() = default;
  // occupations has n_orbitals - 2 entries, one per environment orbital.
  IntegralSet(std::size_t n_orbitals, std::vector<int> occupations);

  std::size_t n_orbitals() const { return n_; }
  std::size_t n_environment() const { return n_ - 2; }

  Eigen::MatrixXd& t() { return t_; }
  const Eigen::MatrixXd& t() const { return t_; }

  double& h(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return h_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double h(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return h_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  // Sets all eight symmetry images of (pq|rs).
  void set_h(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value);

  double core_energy() const { return core_; }
  void set_core_energy(double e) { core_ = e; }

  // Occupation of orbital p (full index): 1 doubly occupied, 0 empty.
  // Active orbitals report 0.
  int occupation(std::size_t p) const { return p < 2 ? 0 : occ_[p - 2]; }
  const std::vector<int>& environment_occupations() const { return occ_; }

  std::vector<std::size_t> occupied() const;
  std::vector<std::size_t> empty() const;

  // Largest violation of t symmetry and of the eight-fold symmetry of h.
  double symmetry_deviation() const;

 private:
  std::size_t n_ = 0;
  Eigen::MatrixXd t_;
  std::vector<double> h_;
  std::vector<int> occ_;
  double core_ = 0.0;
};

// FCIDUMP-style text:
//   &FCI NORB=4,
//    ENVOCC=1,0,
//   &END
//    value i j k l       (1-based; k = l = 0 gives t_ij, all zero the core energy)
// Integrals are expanded to their permutation images. Explicit entries whose
// images disagree by more than 1e-8 raise ParseError quoting the deviation.
IntegralSet parse_integrals(std::istream& in);
IntegralSet read_integrals(const std::filesystem::path& path);
void write_integrals(std::ostream& out, const IntegralSet& ints);

inline constexpr double kSymmetryTolerance = 1e-8;

// t~ = t + sum_k (2 h_pqkk - h_pkkq) n_k over environment orbitals.
Eigen::MatrixXd effective_hoppings(const IntegralSet& ints);

struct Mode {
  std::size_t m = 0;      // empty environment orbital
  std::size_t alpha = 0;  // doubly occupied environment orbital
  double omega = 0.0;     // Hartree
};

// One mode per (empty, occupied) pair, ordered by m then alpha.
// w = t~_mm - t~_aa - h_mmaa + h_mama; throws InstabilityError if any w <= 0.
std::vector<Mode> mode_frequencies(const IntegralSet& ints, const Eigen::MatrixXd& t_eff);

// Closed-shell energy of the environment determinant.
double env_hf_energy(const IntegralSet& ints);

}  // namespace magsim::rpa
