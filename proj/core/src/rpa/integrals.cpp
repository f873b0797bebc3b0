#include "magsim/rpa/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "magsim/errors.hpp"

namespace magsim::rpa {
namespace {

using Index4 = std::array<std::size_t, 4>;

std::array<Index4, 8> images(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
  return {{{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
           {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}}};
}

Index4 canonical(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
  auto all = images(p, q, r, s);
  return *std::min_element(all.begin(), all.end());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

IntegralSet::IntegralSet(std::size_t n_orbitals, std::vector<int> occupations)
    : n_(n_orbitals), occ_(std::move(occupations)) {
  if (n_ < 2) throw std::invalid_argument("at least the two active orbitals are required");
  if (occ_.size() != n_ - 2) {
    throw std::invalid_argument(
        fmt::format("{} environment occupations given for {} orbitals", occ_.size(), n_));
  }
  for (std::size_t k = 0; k < occ_.size(); ++k) {
    if (occ_[k] != 0 && occ_[k] != 1) {
      throw std::invalid_argument(fmt::format(
          "orbital {} has occupation {}; only 0 (empty) or 1 (doubly occupied) is supported", k + 3, occ_[k]));
    }
  }
  t_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  h_.assign(n_ * n_ * n_ * n_, 0.0);
}

void IntegralSet::set_h(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value) {
  for (const auto& [a, b, c, d] : images(p, q, r, s)) h(a, b, c, d) = value;
}

std::vector<std::size_t> IntegralSet::occupied() const {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p < n_; ++p) {
    if (occupation(p) == 1) out.push_back(p);
  }
  return out;
}

std::vector<std::size_t> IntegralSet::empty() const {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p < n_; ++p) {
    if (occupation(p) == 0) out.push_back(p);
  }
  return out;
}

double IntegralSet::symmetry_deviation() const {
  double dev = (t_ - t_.transpose()).cwiseAbs().maxCoeff();
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = 0; q < n_; ++q)
      for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t s = 0; s < n_; ++s) {
          const double v = h(p, q, r, s);
          for (const auto& [a, b, c, d] : images(p, q, r, s)) dev = std::max(dev, std::abs(v - h(a, b, c, d)));
        }
  return dev;
}

IntegralSet parse_integrals(std::istream& in) {
  std::string line;
  std::string header;
  bool header_done = false;
  std::size_t line_no = 0;
  while (!header_done && std::getline(in, line)) {
    ++line_no;
    header += line + '\n';
    if (line.find("&END") != std::string::npos || trim(line) == "/") header_done = true;
  }
  if (!header_done) throw ParseError("integral file: missing &FCI ... &END header");

  std::smatch match;
  if (!std::regex_search(header, match, std::regex(R"(NORB\s*=\s*(-?\d+))", std::regex::icase))) {
    throw ParseError("integral file: NORB missing from header");
  }
  const long norb = std::stol(match[1]);
  if (norb <= 0) throw ParseError(fmt::format("integral file: orbital count must be positive, got {}", norb));
  if (norb < 2) throw ParseError("integral file: the active space needs two orbitals");

  if (!std::regex_search(header, match, std::regex(R"(ENVOCC\s*=([^\n&/]*))", std::regex::icase))) {
    throw ParseError("integral file: missing ENVOCC occupation line");
  }
  std::vector<int> occ;
  {
    std::string list = match[1];
    std::replace(list.begin(), list.end(), ',', ' ');
    std::istringstream ls(list);
    std::string tok;
    while (ls >> tok) {
      try {
        occ.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ParseError(fmt::format("integral file: bad occupation '{}'", tok));
      }
    }
  }
  const auto n = static_cast<std::size_t>(norb);
  if (occ.size() != n - 2) {
    throw ParseError(fmt::format("integral file: ENVOCC lists {} occupations, expected {} (NORB - 2)", occ.size(), n - 2));
  }

  IntegralSet ints;
  try {
    ints = IntegralSet(n, occ);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("integral file: ") + e.what());
  }

  // Explicit values grouped by symmetry orbit; images must agree.
  std::map<Index4, std::vector<double>> two;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> one;
  std::vector<double> core;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == '!') continue;
    std::istringstream ls(body);
    double v = 0.0;
    long i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> v >> i >> j >> k >> l)) {
      throw ParseError(fmt::format("integral file line {}: expected 'value i j k l'", line_no));
    }
    for (long idx : {i, j, k, l}) {
      if (idx < 0 || idx > norb) {
        throw ParseError(fmt::format("integral file line {}: index {} outside 0..{}", line_no, idx, norb));
      }
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      core.push_back(v);
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) throw ParseError(fmt::format("integral file line {}: incomplete one-electron index", line_no));
      const auto a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(j - 1);
      one[std::minmax(a, b)].push_back(v);
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) {
        throw ParseError(fmt::format("integral file line {}: incomplete two-electron index", line_no));
      }
      two[canonical(i - 1, j - 1, k - 1, l - 1)].push_back(v);
    }
  }

  double deviation = 0.0;
  auto mean_of = [&](const std::vector<double>& vals) {
    double sum = 0.0;
    for (double x : vals) sum += x;
    const double mean = sum / static_cast<double>(vals.size());
    for (double x : vals) deviation = std::max(deviation, std::abs(x - vals.front()));
    return mean;
  };
  for (const auto& [key, vals] : one) {
    const double v = mean_of(vals);
    ints.t()(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = v;
    ints.t()(static_cast<Eigen::Index>(key.second), static_cast<Eigen::Index>(key.first)) = v;
  }
  for (const auto& [key, vals] : two) ints.set_h(key[0], key[1], key[2], key[3], mean_of(vals));
  if (core.size() > 0) ints.set_core_energy(mean_of(core));
  if (deviation > kSymmetryTolerance) {
    throw ParseError(fmt::format("integral file: permutation symmetry violated, max deviation {:.3e}", deviation));
  }
  return ints;
}

IntegralSet read_integrals(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_integrals(in);
}

void write_integrals(std::ostream& out, const IntegralSet& ints) {
  const std::size_t n = ints.n_orbitals();
  out << fmt::format("&FCI NORB={},\n ENVOCC=", n);
  for (int o : ints.environment_occupations()) out << o << ',';
  out << "\n&END\n";
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          const double v = ints.h(p, q, r, s);
          if (v != 0.0) out << fmt::format("{:.17g} {} {} {} {}\n", v, p + 1, q + 1, r + 1, s + 1);
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = ints.t()(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (v != 0.0) out << fmt::format("{:.17g} {} {} 0 0\n", v, p + 1, q + 1);
    }
  out << fmt::format("{:.17g} 0 0 0 0\n", ints.core_energy());
}

Eigen::MatrixXd effective_hoppings(const IntegralSet& ints) {
  // Mean field of the closed-shell environment density D = diag(n):
  // t~ = t + 2 J[D] - K[D].
  const std::size_t n = ints.n_orbitals();
  Eigen::MatrixXd coulomb = Eigen::MatrixXd::Zero(ints.t().rows(), ints.t().cols());
  Eigen::MatrixXd exchange = coulomb;
  for (std::size_t k : ints.occupied()) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        coulomb(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += ints.h(p, q, k, k);
        exchange(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += ints.h(p, k, k, q);
      }
  }
  return ints.t() + 2.0 * coulomb - exchange;
}

std::vector<Mode> mode_frequencies(const IntegralSet& ints, const Eigen::MatrixXd& t_eff) {
  std::vector<Mode> modes;
  for (std::size_t m : ints.empty()) {
    for (std::size_t a : ints.occupied()) {
      const auto mi = static_cast<Eigen::Index>(m), ai = static_cast<Eigen::Index>(a);
      const double w = t_eff(mi, mi) - t_eff(ai, ai) - ints.h(m, m, a, a) + ints.h(m, a, m, a);
      if (!(w > 0.0)) {
        throw InstabilityError(fmt::format(
            "RPA instability: mode (m={}, alpha={}) has non-positive frequency {:.6g} Hartree", m + 1, a + 1, w));
      }
      modes.push_back({m, a, w});
    }
  }
  return modes;
}

double env_hf_energy(const IntegralSet& ints) {
  // E = sum_q n_q (t_qq + t~_qq), the usual closed-shell identity.
  const Eigen::MatrixXd t_eff = effective_hoppings(ints);
  double e = 0.0;
  for (std::size_t q : ints.occupied()) {
    const auto i = static_cast<Eigen::Index>(q);
    e += ints.t()(i, i) + t_eff(i, i);
  }
  return e;
}

}  // namespace magsim::rpa
