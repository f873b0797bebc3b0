#include "magsim/rpa/oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "magsim/errors.hpp"
#include "magsim/parallel.hpp"

namespace magsim::rpa {
namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Boson operators on the truncated product space of all modes.
struct BosonSpace {
  std::size_t levels;
  std::size_t modes;
  Eigen::Index dim;

  BosonSpace(std::size_t n_max, std::size_t n_modes) : levels(n_max + 1), modes(n_modes), dim(1) {
    for (std::size_t i = 0; i < n_modes; ++i) dim *= static_cast<Eigen::Index>(levels);
  }

  Eigen::MatrixXd embed(const Eigen::MatrixXd& single, std::size_t mode) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    const auto l = static_cast<Eigen::Index>(levels);
    for (std::size_t i = 0; i < modes; ++i) out = kron(out, i == mode ? single : Eigen::MatrixXd::Identity(l, l));
    return out;
  }

  Eigen::MatrixXd position(std::size_t mode) const {
    const auto l = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(l, l);
    for (Eigen::Index n = 0; n + 1 < l; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
    return embed(x, mode);
  }

  Eigen::MatrixXd number(std::size_t mode) const {
    const auto l = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXd n = Eigen::MatrixXd::Zero(l, l);
    for (Eigen::Index k = 0; k < l; ++k) n(k, k) = static_cast<double>(k);
    return embed(n, mode);
  }
};

Eigen::MatrixXd environment_hamiltonian(const RpaModel& model, const BosonSpace& bosons,
                                        const std::vector<Eigen::MatrixXd>& x) {
  Eigen::MatrixXd h = model.environment_offset() * Eigen::MatrixXd::Identity(bosons.dim, bosons.dim);
  for (std::size_t i = 0; i < model.n_modes(); ++i) {
    h += model.modes[i].omega * bosons.number(i);
    for (std::size_t j = 0; j < model.n_modes(); ++j) {
      h += model.mode_mode(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * (x[i] * x[j]);
    }
  }
  return h;
}

// H restricted to fermion states spanned by the columns of `basis`.
Eigen::MatrixXd projected_hamiltonian(const RpaModel& model, std::size_t n_boson_max, const Eigen::MatrixXd& basis) {
  const BosonSpace bosons(n_boson_max, model.n_modes());
  std::vector<Eigen::MatrixXd> x;
  for (std::size_t i = 0; i < model.n_modes(); ++i) x.push_back(bosons.position(i));
  const Eigen::MatrixXd bt = basis.transpose();
  const Eigen::Index f = basis.cols();
  Eigen::MatrixXd h = kron(bt * model.h12 * basis, Eigen::MatrixXd::Identity(bosons.dim, bosons.dim));
  h += kron(Eigen::MatrixXd::Identity(f, f), environment_hamiltonian(model, bosons, x));
  for (std::size_t i = 0; i < model.n_modes(); ++i) {
    h += kron(bt * model.coupling_operator(i) * basis, x[i]);
  }
  return h;
}

double lowest_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

std::size_t oracle_dimension(const RpaModel& model, std::size_t n_boson_max) {
  double dim = kSectorDim;
  for (std::size_t i = 0; i < model.n_modes(); ++i) dim *= static_cast<double>(n_boson_max + 1);
  if (dim > static_cast<double>(kOracleCapacity)) {
    const auto reported = dim < 1e18 ? static_cast<std::size_t>(dim) : std::size_t(-1);
    throw CapacityError(fmt::format("oracle dimension {} exceeds capacity {}", reported, kOracleCapacity), reported);
  }
  return static_cast<std::size_t>(dim);
}

Eigen::MatrixXd oracle_hamiltonian(const RpaModel& model, std::size_t n_boson_max) {
  oracle_dimension(model, n_boson_max);
  return projected_hamiltonian(model, n_boson_max, SectorMatrix::Identity());
}

Eigen::MatrixXd oracle_spin_squared(const RpaModel& model, std::size_t n_boson_max) {
  oracle_dimension(model, n_boson_max);
  const BosonSpace bosons(n_boson_max, model.n_modes());
  return kron(spin_squared(), Eigen::MatrixXd::Identity(bosons.dim, bosons.dim));
}

double oracle_gap(const RpaModel& model, std::size_t n_boson_max) {
  oracle_dimension(model, n_boson_max);
  const auto& sub = spin_subspaces();
  const double singlet = lowest_eigenvalue(projected_hamiltonian(model, n_boson_max, sub.singlet));
  const double triplet = lowest_eigenvalue(projected_hamiltonian(model, n_boson_max, sub.triplet));
  return triplet - singlet;
}

OracleSweep extrapolated_oracle_gap(const RpaModel& model, const std::vector<std::size_t>& truncations) {
  OracleSweep sweep;
  sweep.truncations = truncations;
  sweep.gaps.assign(truncations.size(), 0.0);
  for (std::size_t n : truncations) oracle_dimension(model, n);
  parallel_for(truncations.size(), [&](std::size_t i) { sweep.gaps[i] = oracle_gap(model, truncations[i]); });
  if (sweep.gaps.empty()) return sweep;
  sweep.extrapolated = sweep.gaps.back();
  if (sweep.gaps.size() >= 3) {
    const std::size_t k = sweep.gaps.size();
    const double x0 = sweep.gaps[k - 3], x1 = sweep.gaps[k - 2], x2 = sweep.gaps[k - 1];
    const double d1 = x1 - x0, d2 = x2 - x1;
    const double denom = d2 - d1;
    // Only trust the estimate for a geometrically shrinking sequence.
    if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(x2)) && std::abs(d2) < std::abs(d1)) {
      sweep.extrapolated = x2 - d2 * d2 / denom;
    }
  }
  return sweep;
}

}  // namespace magsim::rpa
