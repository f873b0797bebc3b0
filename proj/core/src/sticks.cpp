#include "magsim/sticks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

#include "magsim/parallel.hpp"

namespace magsim {
namespace {

// Dense restriction of `op` to rows in block `row_block` and columns in
// block `col_block`, in block-local coordinates.
Eigen::MatrixXcd restrict(const SparseMatrix& op, const EigenSystem& eigen, std::size_t row_block,
                          std::size_t col_block) {
  const auto& rows = eigen.blocks()[row_block].basis;
  const auto& cols = eigen.blocks()[col_block].basis;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (SparseMatrix::InnerIterator it(op, rows[a]); it; ++it) {
      const auto [b, local] = eigen.locate(it.col());
      if (b == col_block) out(static_cast<Eigen::Index>(a), local) = it.value();
    }
  }
  return out;
}

bool line_less(const StickLine& a, const StickLine& b) {
  if (a.hz != b.hz) return a.hz < b.hz;
  if (a.amplitude.real() != b.amplitude.real()) return a.amplitude.real() < b.amplitude.real();
  return a.amplitude.imag() < b.amplitude.imag();
}

}  // namespace

cplx StickSpectrum::total_amplitude() const {
  cplx sum = 0.0;
  for (const auto& l : lines) sum += l.amplitude;
  return sum;
}

StickSpectrum stick_spectrum(const EigenSystem& eigen, const SpinOperator& detect,
                             const SpinOperator& excite, double relative_floor) {
  if (detect.dimension() != eigen.dimension() || excite.dimension() != eigen.dimension()) {
    throw std::invalid_argument("stick_spectrum: operator and eigensystem dimensions differ");
  }
  // Block pairs (row block of detect, column block of detect) that carry
  // nonzero detection matrix elements.
  std::set<std::pair<std::size_t, std::size_t>> pair_set;
  const SparseMatrix& d = detect.matrix();
  for (Eigen::Index r = 0; r < d.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(d, r); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      pair_set.emplace(eigen.locate(r).first, eigen.locate(it.col()).first);
    }
  }
  const std::vector<std::pair<std::size_t, std::size_t>> pairs(pair_set.begin(), pair_set.end());

  std::vector<std::vector<StickLine>> per_pair(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [a, b] = pairs[p];
    const Eigen::MatrixXcd x_sub = restrict(excite.matrix(), eigen, b, a);
    if (x_sub.cwiseAbs().maxCoeff() == 0.0) return;
    const Eigen::MatrixXcd d_sub = restrict(d, eigen, a, b);
    const auto& ba = eigen.blocks()[a];
    const auto& bb = eigen.blocks()[b];
    const Eigen::MatrixXcd dt = ba.vectors.adjoint() * d_sub * bb.vectors;
    const Eigen::MatrixXcd xt = bb.vectors.adjoint() * x_sub * ba.vectors;
    auto& out = per_pair[p];
    out.reserve(static_cast<std::size_t>(dt.size()));
    for (Eigen::Index i = 0; i < dt.rows(); ++i) {
      for (Eigen::Index j = 0; j < dt.cols(); ++j) {
        const cplx amp = dt(i, j) * xt(j, i);
        if (amp == cplx(0.0)) continue;
        out.push_back({(ba.energies[i] - bb.energies[j]) / (2.0 * std::numbers::pi), amp});
      }
    }
  });

  StickSpectrum result;
  std::size_t total = 0;
  for (const auto& v : per_pair) total += v.size();
  result.lines.reserve(total);
  for (auto& v : per_pair) result.lines.insert(result.lines.end(), v.begin(), v.end());
  prune_lines(result, relative_floor);
  sort_lines(result);
  return result;
}

void sort_lines(StickSpectrum& sticks) {
  std::sort(sticks.lines.begin(), sticks.lines.end(), line_less);
}

void prune_lines(StickSpectrum& sticks, double relative_floor) {
  double largest = 0.0;
  for (const auto& l : sticks.lines) largest = std::max(largest, std::abs(l.amplitude));
  const double floor = relative_floor * largest;
  std::erase_if(sticks.lines, [floor](const StickLine& l) {
    return std::abs(l.amplitude) < floor || l.amplitude == cplx(0.0);
  });
}

StickSpectrum merge_degenerate(const StickSpectrum& sticks, double tolerance_hz) {
  StickSpectrum out;
  out.detected_isotope = sticks.detected_isotope;
  const auto& in = sticks.lines;
  std::size_t start = 0;
  while (start < in.size()) {
    std::size_t end = start + 1;
    while (end < in.size() && in[end].hz - in[end - 1].hz <= tolerance_hz) ++end;
    StickLine merged{0.0, 0.0};
    for (std::size_t i = start; i < end; ++i) {
      merged.hz += in[i].hz;
      merged.amplitude += in[i].amplitude;
    }
    merged.hz /= static_cast<double>(end - start);
    if (merged.amplitude != cplx(0.0)) out.lines.push_back(merged);
    start = end;
  }
  return out;
}

StickSpectrum concatenate(const std::vector<StickSpectrum>& parts) {
  StickSpectrum out;
  for (const auto& p : parts) {
    if (out.detected_isotope.empty()) out.detected_isotope = p.detected_isotope;
    out.lines.insert(out.lines.end(), p.lines.begin(), p.lines.end());
  }
  sort_lines(out);
  return out;
}

}  // namespace magsim
