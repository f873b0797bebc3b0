#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magsim/spin_operator.hpp"

namespace magsim {

// Eigenpairs of one invariant subspace of the Hamiltonian. The subspace is
// spanned by the listed computational basis states; eigenvector columns are
// expressed in those local coordinates.
struct EigenBlock {
  std::vector<Eigen::Index> basis;  // ascending
  Eigen::VectorXd energies;         // ascending, rad/s
  Eigen::MatrixXcd vectors;
};

// Block-diagonal eigendecomposition H = V diag(E) V^dagger.
class EigenSystem {
 public:
  EigenSystem(Eigen::Index dimension, std::vector<EigenBlock> blocks);

  Eigen::Index dimension() const { return dimension_; }
  const std::vector<EigenBlock>& blocks() const { return blocks_; }
  std::size_t largest_block() const;

  // Block index and local coordinate of a computational basis state.
  std::pair<std::size_t, Eigen::Index> locate(Eigen::Index state) const {
    return {block_of_[state], local_of_[state]};
  }

  // All energies, ascending.
  Eigen::VectorXd energies() const;
  // Dense unitary whose columns are ordered like energies().
  Eigen::MatrixXcd vectors() const;

  // exp(-i H t)
  Eigen::MatrixXcd propagator(double t) const;
  // exp(-i H t) rho exp(i H t), the Liouville-von Neumann solution.
  Eigen::MatrixXcd evolve(const Eigen::MatrixXcd& rho, double t) const;

 private:
  Eigen::Index dimension_;
  std::vector<EigenBlock> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<Eigen::Index> local_of_;
};

// Splits H into the connected components of its sparsity graph and
// diagonalizes each component densely. Throws std::invalid_argument when H
// is not Hermitian.
EigenSystem eigendecompose(const SpinOperator& h);

}  // namespace magsim
