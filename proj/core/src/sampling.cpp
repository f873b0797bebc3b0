#include "magsim/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "magsim/errors.hpp"
#include "magsim/parallel.hpp"

namespace magsim {
namespace {

// Fixed reduction granularity; independent of the worker count.
constexpr std::size_t kChunk = 64;

struct PairTerms {
  std::size_t row_block, col_block;
  Eigen::MatrixXcd detect;  // V_a^dagger D V_b
  std::size_t first_line;
};

struct Moments {
  Eigen::VectorXcd sum;
  Eigen::VectorXd sq_re, sq_im;
};

std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t sample, std::size_t word) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)};
  std::mt19937_64 gen(seq);
  gen.discard(word);
  return gen();
}

}  // namespace

SampledSpectrum sampled_expectation(const EigenSystem& eigen, const SpinOperator& detect,
                                    std::size_t n_spins,
                                    std::span<const std::size_t> weighted_sites,
                                    std::optional<std::size_t> n_samples, std::uint64_t seed) {
  if (n_samples && *n_samples == 0) throw std::invalid_argument("n_samples must be positive");
  if (n_spins >= 63 || eigen.dimension() != (Eigen::Index{1} << n_spins)) {
    throw std::invalid_argument("sampled_expectation: eigensystem is not a spin-1/2 product space");
  }
  if (detect.dimension() != eigen.dimension()) {
    throw std::invalid_argument("sampled_expectation: detection operator dimension mismatch");
  }
  for (std::size_t k : weighted_sites) {
    if (k >= n_spins) throw std::out_of_range(fmt::format("weighted site {} out of range", k));
  }
  if (!n_samples && n_spins > kMaxExhaustiveSpins) {
    throw CapacityError(fmt::format("exhaustive sampling limited to {} spins, got {}",
                                    kMaxExhaustiveSpins, n_spins),
                        static_cast<std::size_t>(eigen.dimension()));
  }

  // Detection operator in the eigenbasis, one dense block per block pair.
  std::set<std::pair<std::size_t, std::size_t>> pair_set;
  const SparseMatrix& d = detect.matrix();
  for (Eigen::Index r = 0; r < d.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(d, r); it; ++it) {
      if (it.value() != cplx(0.0)) pair_set.emplace(eigen.locate(r).first, eigen.locate(it.col()).first);
    }
  }
  std::vector<PairTerms> pairs;
  std::size_t n_lines = 0;
  for (const auto& [a, b] : pair_set) {
    const auto& ba = eigen.blocks()[a];
    const auto& bb = eigen.blocks()[b];
    Eigen::MatrixXcd sub = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ba.basis.size()),
                                                  static_cast<Eigen::Index>(bb.basis.size()));
    for (std::size_t i = 0; i < ba.basis.size(); ++i) {
      for (SparseMatrix::InnerIterator it(d, ba.basis[i]); it; ++it) {
        const auto [blk, local] = eigen.locate(it.col());
        if (blk == b) sub(static_cast<Eigen::Index>(i), local) = it.value();
      }
    }
    PairTerms t{a, b, ba.vectors.adjoint() * sub * bb.vectors, n_lines};
    n_lines += static_cast<std::size_t>(t.detect.size());
    pairs.push_back(std::move(t));
  }

  const Eigen::Index dim = eigen.dimension();
  const std::uint64_t n_states = std::uint64_t{1} << n_spins;
  const std::size_t total = n_samples ? *n_samples : static_cast<std::size_t>(n_states);
  const double amp = std::pow(0.5, 0.5 * static_cast<double>(n_spins));
  std::vector<bool> weighted(n_spins, false);
  for (std::size_t k : weighted_sites) weighted[k] = true;

  // Bit k of `pattern` set means spin k is in |-y>.
  auto sample_pattern = [&](std::size_t s) -> std::uint64_t {
    if (!n_samples) return s;
    std::uint64_t bits = 0;
    for (std::size_t w = 0; w * 64 < n_spins; ++w) bits |= draw_bits(seed, s, w);
    return n_spins == 64 ? bits : (bits & (n_states - 1));
  };

  auto contributions = [&](std::uint64_t pattern, Eigen::VectorXcd& out) {
    double m = 0.0;
    for (std::size_t k = 0; k < n_spins; ++k) {
      if (weighted[k]) m += (pattern >> k & 1u) ? -0.5 : 0.5;
    }
    out.setZero(static_cast<Eigen::Index>(n_lines));
    if (m == 0.0) return;
    // |psi> = prod_k (|up> + s_k i |down>) / sqrt(2); site 0 is the most significant digit.
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index z = 0; z < dim; ++z) {
      cplx c = amp;
      for (std::size_t k = 0; k < n_spins; ++k) {
        const bool down = (z >> (n_spins - 1 - k)) & 1;
        if (down) c *= (pattern >> k & 1u) ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
      }
      psi[z] = c;
    }
    std::vector<Eigen::VectorXcd> coeff(eigen.blocks().size());
    for (const auto& p : pairs) {
      for (std::size_t blk : {p.row_block, p.col_block}) {
        if (coeff[blk].size() != 0) continue;
        const auto& block = eigen.blocks()[blk];
        Eigen::VectorXcd local(static_cast<Eigen::Index>(block.basis.size()));
        for (std::size_t i = 0; i < block.basis.size(); ++i) local[static_cast<Eigen::Index>(i)] = psi[block.basis[i]];
        coeff[blk] = block.vectors.adjoint() * local;
      }
    }
    for (const auto& p : pairs) {
      const Eigen::VectorXcd& ca = coeff[p.row_block];
      const Eigen::VectorXcd& cb = coeff[p.col_block];
      std::size_t line = p.first_line;
      for (Eigen::Index i = 0; i < p.detect.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.detect.cols(); ++j) {
          out[static_cast<Eigen::Index>(line++)] = m * std::conj(ca[i]) * p.detect(i, j) * cb[j];
        }
      }
    }
  };

  const std::size_t n_chunks = (total + kChunk - 1) / kChunk;
  std::vector<Moments> chunks(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    Moments mo{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_lines)),
               Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_lines)),
               Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_lines))};
    Eigen::VectorXcd x;
    const std::size_t end = std::min(total, (c + 1) * kChunk);
    for (std::size_t s = c * kChunk; s < end; ++s) {
      contributions(sample_pattern(s), x);
      mo.sum += x;
      mo.sq_re += x.real().cwiseAbs2();
      mo.sq_im += x.imag().cwiseAbs2();
    }
    chunks[c] = std::move(mo);
  });

  Moments acc{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_lines)),
              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_lines)),
              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_lines))};
  for (const auto& mo : chunks) {
    acc.sum += mo.sum;
    acc.sq_re += mo.sq_re;
    acc.sq_im += mo.sq_im;
  }

  struct Entry {
    StickLine line;
    cplx error;
  };
  std::vector<Entry> entries;
  entries.reserve(n_lines);
  const double n = static_cast<double>(total);
  const double space = static_cast<double>(n_states);
  for (const auto& p : pairs) {
    const auto& ba = eigen.blocks()[p.row_block];
    const auto& bb = eigen.blocks()[p.col_block];
    std::size_t line = p.first_line;
    for (Eigen::Index i = 0; i < p.detect.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.detect.cols(); ++j, ++line) {
        const auto li = static_cast<Eigen::Index>(line);
        const double hz = (ba.energies[i] - bb.energies[j]) / (2.0 * std::numbers::pi);
        if (!n_samples) {
          entries.push_back({{hz, acc.sum[li]}, cplx(0.0)});
          continue;
        }
        const cplx mean = acc.sum[li] / n;
        const double var_re = total > 1 ? std::max(0.0, (acc.sq_re[li] - n * mean.real() * mean.real()) / (n - 1.0)) : 0.0;
        const double var_im = total > 1 ? std::max(0.0, (acc.sq_im[li] - n * mean.imag() * mean.imag()) / (n - 1.0)) : 0.0;
        entries.push_back({{hz, space * mean},
                           cplx(space * std::sqrt(var_re / n), space * std::sqrt(var_im / n))});
      }
    }
  }

  double largest = 0.0;
  for (const auto& e : entries) largest = std::max(largest, std::abs(e.line.amplitude));
  const double floor = kAmplitudeFloor * largest;
  std::erase_if(entries, [floor](const Entry& e) {
    return std::abs(e.line.amplitude) < floor || e.line.amplitude == cplx(0.0);
  });
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.line.hz != b.line.hz) return a.line.hz < b.line.hz;
    if (a.line.amplitude.real() != b.line.amplitude.real()) return a.line.amplitude.real() < b.line.amplitude.real();
    return a.line.amplitude.imag() < b.line.amplitude.imag();
  });

  SampledSpectrum out;
  out.samples = total;
  out.exhaustive = !n_samples.has_value();
  out.sticks.lines.reserve(entries.size());
  out.standard_error.reserve(entries.size());
  for (const auto& e : entries) {
    out.sticks.lines.push_back(e.line);
    out.standard_error.push_back(e.error);
  }
  return out;
}

}  // namespace magsim
