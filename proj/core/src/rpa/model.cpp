#include "magsim/rpa/model.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "magsim/errors.hpp"

namespace magsim::rpa {

SectorMatrix RpaModel::coupling_operator(std::size_t mode) const {
  SectorMatrix o = SectorMatrix::Zero();
  const Eigen::Matrix2d& g = couplings.at(mode);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) o += g(p, q) * excitation(p, q);
  return o;
}

double RpaModel::environment_offset() const {
  double e = env_hf_energy;
  for (Eigen::Index i = 0; i < mode_mode.rows(); ++i) e -= mode_mode(i, i);
  return e;
}

RpaBuild build_rpa_model(const IntegralSet& ints, double validity_threshold) {
  const Eigen::MatrixXd t_eff = effective_hoppings(ints);
  RpaBuild out;
  RpaModel& model = out.model;
  model.modes = mode_frequencies(ints, t_eff);
  model.env_hf_energy = env_hf_energy(ints);
  model.core_energy = ints.core_energy();

  ActiveIntegrals active;
  active.t = t_eff.topLeftCorner<2, 2>();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) active.at(p, q, r, s) = ints.h(p, q, r, s);
  model.h12 = two_orbital_hamiltonian(active);

  const std::size_t n_modes = model.modes.size();
  model.mode_mode = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_modes), static_cast<Eigen::Index>(n_modes));
  model.couplings.reserve(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    const Mode& a = model.modes[i];
    Eigen::Matrix2d g;
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t q = 0; q < 2; ++q)
        g(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = std::numbers::sqrt2 * ints.h(p, q, a.m, a.alpha);
    model.couplings.push_back(g);
    for (std::size_t j = 0; j < n_modes; ++j) {
      const Mode& b = model.modes[j];
      model.mode_mode(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ints.h(a.m, a.alpha, b.m, b.alpha);
    }
  }

  ValidityReport& v = out.validity;
  v.threshold = validity_threshold;
  for (const Mode& md : model.modes) {
    const double r1 = ints.h(md.m, md.alpha, md.m, md.alpha) / md.omega;
    const double r2 =
        (ints.h(md.m, md.m, md.m, md.m) + ints.h(md.alpha, md.alpha, md.alpha, md.alpha) -
         2.0 * ints.h(md.m, md.m, md.alpha, md.alpha)) / md.omega;
    v.exchange_ratio.push_back(r1);
    v.density_ratio.push_back(r2);
    v.max_exchange_ratio = std::max(v.max_exchange_ratio, std::abs(r1));
    v.max_density_ratio = std::max(v.max_density_ratio, std::abs(r2));
  }
  v.pass = v.max_exchange_ratio < validity_threshold && v.max_density_ratio < validity_threshold;
  return out;
}

StaticGap static_gap(const RpaModel& model) {
  StaticGap out;
  out.renormalized_h12 = model.h12;
  const std::size_t n = model.n_modes();
  if (n > 0) {
    Eigen::MatrixXd a = model.mode_mode;
    for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += model.modes[i].omega / 4.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw InstabilityError("static boson form: eigensolver did not converge");
    const double smallest = es.eigenvalues()(0);
    if (!(smallest > 0.0)) {
      throw InstabilityError(fmt::format(
          "RPA instability: static boson form is not positive definite (lowest eigenvalue {:.6g} Hartree)", smallest));
    }
    std::vector<SectorMatrix> ops;
    ops.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ops.push_back(model.coupling_operator(i));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      SectorMatrix normal = SectorMatrix::Zero();
      for (std::size_t i = 0; i < n; ++i) normal += es.eigenvectors()(static_cast<Eigen::Index>(i), k) * ops[i];
      out.renormalized_h12 -= normal * normal / (4.0 * es.eigenvalues()(k));
    }
  }
  out.levels = spin_levels(out.renormalized_h12);
  out.gap = out.levels.gap();
  return out;
}

double bare_gap(const RpaModel& model) { return spin_levels(model.h12).gap(); }

}  // namespace magsim::rpa
