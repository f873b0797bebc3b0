#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace magsim {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, Eigen::Index>;

enum class Axis { kX, kY, kZ, kPlus, kMinus };

// Tensor-product Hilbert space of spin sites. Site k carries spin S_k
// (stored as 2 S_k) and local dimension 2 S_k + 1. The first site is the
// most significant factor of the Kronecker product; local digit d encodes
// magnetic quantum number m = S_k - d, so digit 0 is spin-up.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<int> twice_spins);
  static ProductSpace spin_half(std::size_t sites);

  std::size_t sites() const { return twice_spin_.size(); }
  Eigen::Index dimension() const { return dimension_; }
  int twice_spin(std::size_t site) const { return twice_spin_[site]; }
  int local_dimension(std::size_t site) const { return twice_spin_[site] + 1; }
  Eigen::Index stride(std::size_t site) const { return stride_[site]; }

  int digit(Eigen::Index state, std::size_t site) const {
    return static_cast<int>((state / stride_[site]) % local_dimension(site));
  }
  // Magnetic quantum number of `site` in basis state `state`.
  double m(Eigen::Index state, std::size_t site) const {
    return 0.5 * twice_spin_[site] - digit(state, site);
  }

 private:
  std::vector<int> twice_spin_;
  std::vector<Eigen::Index> stride_;
  Eigen::Index dimension_ = 1;
};

// Matrix of a spin-space operator in the computational (product Zeeman)
// basis. Stored sparse; dense() materializes it for small spaces.
class SpinOperator {
 public:
  SpinOperator() = default;
  explicit SpinOperator(SparseMatrix matrix);

  Eigen::Index dimension() const { return matrix_.rows(); }
  const SparseMatrix& matrix() const { return matrix_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

  // max |A - A^dagger| over all entries.
  double hermiticity_error() const;
  // max |A| over all entries.
  double max_abs() const;
  SpinOperator adjoint() const;

  SpinOperator& operator+=(const SpinOperator& other);
  friend SpinOperator operator+(SpinOperator a, const SpinOperator& b) { return a += b; }
  friend SpinOperator operator*(cplx s, const SpinOperator& a);
  friend SpinOperator operator*(const SpinOperator& a, const SpinOperator& b);

 private:
  SparseMatrix matrix_;
};

// (2S+1)-dimensional single-spin matrices in the digit ordering above.
Eigen::MatrixXcd spin_matrix(int twice_spin, Axis axis);

// Single-site operator embedded into the product space.
SpinOperator site_operator(const ProductSpace& space, std::size_t site, Axis axis);

// Sum of site operators over the listed sites.
SpinOperator collective_operator(const ProductSpace& space, Axis axis,
                                 std::span<const std::size_t> sites);

SpinOperator identity_operator(Eigen::Index dimension);

}  // namespace magsim
