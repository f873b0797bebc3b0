#include "magsim/spin_operator.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace magsim {
namespace {

// <m+1| S+ |m>
double raise_coefficient(double spin, double m) {
  return std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
}

}  // namespace

ProductSpace::ProductSpace(std::vector<int> twice_spins) : twice_spin_(std::move(twice_spins)) {
  stride_.assign(twice_spin_.size(), 1);
  dimension_ = 1;
  for (std::size_t k = twice_spin_.size(); k-- > 0;) {
    if (twice_spin_[k] < 0) {
      throw std::invalid_argument(fmt::format("site {} has negative spin", k));
    }
    stride_[k] = dimension_;
    dimension_ *= twice_spin_[k] + 1;
  }
}

ProductSpace ProductSpace::spin_half(std::size_t sites) {
  return ProductSpace(std::vector<int>(sites, 1));
}

SpinOperator::SpinOperator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("spin operator must be square");
  matrix_.makeCompressed();
}

double SpinOperator::hermiticity_error() const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

double SpinOperator::max_abs() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

SpinOperator SpinOperator::adjoint() const { return SpinOperator(SparseMatrix(matrix_.adjoint())); }

SpinOperator& SpinOperator::operator+=(const SpinOperator& other) {
  if (matrix_.size() == 0) {
    matrix_ = other.matrix_;
    return *this;
  }
  if (other.dimension() != dimension()) throw std::invalid_argument("operator dimension mismatch");
  matrix_ = matrix_ + other.matrix_;
  matrix_.prune(cplx(0.0));
  return *this;
}

SpinOperator operator*(cplx s, const SpinOperator& a) { return SpinOperator(SparseMatrix(s * a.matrix_)); }

SpinOperator operator*(const SpinOperator& a, const SpinOperator& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("operator dimension mismatch");
  return SpinOperator(SparseMatrix(a.matrix_ * b.matrix_));
}

Eigen::MatrixXcd spin_matrix(int twice_spin, Axis axis) {
  const int d = twice_spin + 1;
  const double s = 0.5 * twice_spin;
  Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(d, d);
  for (int digit = 0; digit < d; ++digit) {
    const double m = s - digit;
    z(digit, digit) = m;
    if (digit > 0) plus(digit - 1, digit) = raise_coefficient(s, m);
  }
  switch (axis) {
    case Axis::kZ: return z;
    case Axis::kPlus: return plus;
    case Axis::kMinus: return plus.adjoint();
    case Axis::kX: return 0.5 * (plus + plus.adjoint());
    case Axis::kY: return cplx(0.0, -0.5) * (plus - plus.adjoint());
  }
  throw std::invalid_argument("unknown axis");
}

SpinOperator site_operator(const ProductSpace& space, std::size_t site, Axis axis) {
  const std::size_t sites[] = {site};
  return collective_operator(space, axis, sites);
}

SpinOperator collective_operator(const ProductSpace& space, Axis axis,
                                 std::span<const std::size_t> sites) {
  const Eigen::Index dim = space.dimension();
  for (std::size_t k : sites) {
    if (k >= space.sites()) {
      throw std::out_of_range(fmt::format("site index {} out of range (have {})", k, space.sites()));
    }
  }
  std::vector<Eigen::MatrixXcd> local;
  local.reserve(sites.size());
  for (std::size_t k : sites) local.push_back(spin_matrix(space.twice_spin(k), axis));

  std::vector<Eigen::Triplet<cplx, Eigen::Index>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * std::max<std::size_t>(1, sites.size()));
  for (Eigen::Index col = 0; col < dim; ++col) {
    cplx diagonal = 0.0;
    for (std::size_t a = 0; a < sites.size(); ++a) {
      const std::size_t k = sites[a];
      const int from = space.digit(col, k);
      for (int to = 0; to < space.local_dimension(k); ++to) {
        const cplx v = local[a](to, from);
        if (v == cplx(0.0)) continue;
        if (to == from) {
          diagonal += v;
        } else {
          triplets.emplace_back(col + (to - from) * space.stride(k), col, v);
        }
      }
    }
    if (diagonal != cplx(0.0)) triplets.emplace_back(col, col, diagonal);
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SpinOperator(std::move(m));
}

SpinOperator identity_operator(Eigen::Index dimension) {
  SparseMatrix m(dimension, dimension);
  m.setIdentity();
  return SpinOperator(std::move(m));
}

}  // namespace magsim
