#include "magsim/eigen_system.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "magsim/parallel.hpp"

namespace magsim {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Eigen::Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;  // the root is always the smallest member
  }

 private:
  std::vector<Eigen::Index> parent_;
};

EigenBlock diagonalize_block(const SparseMatrix& h, std::vector<Eigen::Index> basis,
                             const std::vector<Eigen::Index>& local_of) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  bool real = true;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (SparseMatrix::InnerIterator it(h, basis[a]); it; ++it) {
      dense(a, local_of[it.col()]) = it.value();
      real = real && it.value().imag() == 0.0;
    }
  }
  // Symmetrize away round-off so the solver sees an exactly Hermitian input.
  dense = 0.5 * (dense + dense.adjoint()).eval();

  EigenBlock block;
  block.basis = std::move(basis);
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense.real());
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    block.energies = solver.eigenvalues();
    block.vectors = solver.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    block.energies = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
  }
  return block;
}

}  // namespace

EigenSystem::EigenSystem(Eigen::Index dimension, std::vector<EigenBlock> blocks)
    : dimension_(dimension),
      blocks_(std::move(blocks)),
      block_of_(static_cast<std::size_t>(dimension)),
      local_of_(static_cast<std::size_t>(dimension)) {
  Eigen::Index covered = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& basis = blocks_[b].basis;
    for (std::size_t a = 0; a < basis.size(); ++a) {
      block_of_[basis[a]] = b;
      local_of_[basis[a]] = static_cast<Eigen::Index>(a);
    }
    covered += static_cast<Eigen::Index>(basis.size());
  }
  if (covered != dimension_) throw std::invalid_argument("eigen blocks do not cover the space");
}

std::size_t EigenSystem::largest_block() const {
  std::size_t out = 0;
  for (const auto& b : blocks_) out = std::max(out, b.basis.size());
  return out;
}

Eigen::VectorXd EigenSystem::energies() const {
  Eigen::VectorXd e(dimension_);
  Eigen::Index pos = 0;
  for (const auto& b : blocks_) {
    e.segment(pos, b.energies.size()) = b.energies;
    pos += b.energies.size();
  }
  std::sort(e.begin(), e.end());
  return e;
}

Eigen::MatrixXcd EigenSystem::vectors() const {
  struct Column {
    double energy;
    std::size_t block;
    Eigen::Index local;
  };
  std::vector<Column> order;
  order.reserve(static_cast<std::size_t>(dimension_));
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (Eigen::Index i = 0; i < blocks_[b].energies.size(); ++i) {
      order.push_back({blocks_[b].energies[i], b, i});
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Column& a, const Column& b) { return a.energy < b.energy; });
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dimension_, dimension_);
  for (std::size_t c = 0; c < order.size(); ++c) {
    const auto& block = blocks_[order[c].block];
    for (std::size_t a = 0; a < block.basis.size(); ++a) {
      v(block.basis[a], static_cast<Eigen::Index>(c)) =
          block.vectors(static_cast<Eigen::Index>(a), order[c].local);
    }
  }
  return v;
}

Eigen::MatrixXcd EigenSystem::propagator(double t) const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dimension_, dimension_);
  for (const auto& block : blocks_) {
    const Eigen::VectorXcd phases =
        (block.energies.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    const Eigen::MatrixXcd ub = block.vectors * phases.asDiagonal() * block.vectors.adjoint();
    for (std::size_t a = 0; a < block.basis.size(); ++a) {
      for (std::size_t c = 0; c < block.basis.size(); ++c) {
        u(block.basis[a], block.basis[c]) =
            ub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
      }
    }
  }
  return u;
}

Eigen::MatrixXcd EigenSystem::evolve(const Eigen::MatrixXcd& rho, double t) const {
  if (rho.rows() != dimension_ || rho.cols() != dimension_) {
    throw std::invalid_argument("density matrix dimension mismatch");
  }
  const Eigen::MatrixXcd u = propagator(t);
  return u * rho * u.adjoint();
}

EigenSystem eigendecompose(const SpinOperator& h) {
  const double scale = std::max(1.0, h.max_abs());
  const double herm = h.hermiticity_error();
  if (herm > 1e-10 * scale) {
    throw std::invalid_argument(fmt::format("operator is not Hermitian (deviation {:.3e})", herm));
  }
  const SparseMatrix& m = h.matrix();
  const Eigen::Index dim = m.rows();

  DisjointSets sets(dim);
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.value() != cplx(0.0)) sets.unite(r, it.col());
    }
  }
  // Components ordered by their smallest member (the root).
  std::vector<Eigen::Index> component_of_root(static_cast<std::size_t>(dim), -1);
  std::vector<std::vector<Eigen::Index>> bases;
  std::vector<Eigen::Index> local_of(static_cast<std::size_t>(dim));
  for (Eigen::Index s = 0; s < dim; ++s) {
    const Eigen::Index root = sets.find(s);
    if (component_of_root[root] < 0) {
      component_of_root[root] = static_cast<Eigen::Index>(bases.size());
      bases.emplace_back();
    }
    auto& basis = bases[static_cast<std::size_t>(component_of_root[root])];
    local_of[s] = static_cast<Eigen::Index>(basis.size());
    basis.push_back(s);
  }

  std::vector<EigenBlock> blocks(bases.size());
  parallel_for(bases.size(), [&](std::size_t b) {
    blocks[b] = diagonalize_block(m, std::move(bases[b]), local_of);
  });
  return EigenSystem(dim, std::move(blocks));
}

}  // namespace magsim
