#include "magsim/io.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "magsim/errors.hpp"

namespace magsim {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(fmt::format("{}: missing required field \"{}\"", where, key));
  }
  return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ParseError(fmt::format("{}: field \"{}\" must be a number", where, key));
  return v.get<double>();
}

std::size_t require_index(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(fmt::format("{}: field \"{}\" must be a non-negative integer", where, key));
  }
  return v.get<std::size_t>();
}

}  // namespace

SpinSystemFile parse_spin_system(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ParseError("spin system file must be a JSON object");

  const double field = require_number(doc, "field_tesla", "spin system");
  if (!(field > 0.0)) throw ParseError(fmt::format("field_tesla must be positive, got {}", field));

  const json& spins_json = require(doc, "spins", "spin system");
  if (!spins_json.is_array() || spins_json.empty()) throw ParseError("\"spins\" must be a non-empty array");
  std::vector<Spin> spins;
  for (std::size_t k = 0; k < spins_json.size(); ++k) {
    const std::string where = fmt::format("spins[{}]", k);
    const json& s = spins_json[k];
    const json& iso = require(s, "isotope", where);
    if (!iso.is_string()) throw ParseError(where + ": isotope must be a string");
    try {
      spins.push_back({isotope_by_symbol(iso.get<std::string>()), require_number(s, "shift_ppm", where)});
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }

  const auto n = static_cast<Eigen::Index>(spins.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  std::map<std::pair<std::size_t, std::size_t>, double> seen;
  if (doc.contains("j_couplings")) {
    const json& list = doc.at("j_couplings");
    if (!list.is_array()) throw ParseError("\"j_couplings\" must be an array");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string where = fmt::format("j_couplings[{}]", e);
      const std::size_t a = require_index(list[e], "i", where);
      const std::size_t b = require_index(list[e], "j", where);
      const double hz = require_number(list[e], "hz", where);
      if (a >= spins.size() || b >= spins.size()) {
        throw ParseError(fmt::format("{}: spin index out of range ({}, {}) for {} spins", where, a, b, spins.size()));
      }
      if (a == b) throw ParseError(fmt::format("{}: self-coupling of spin {}", where, a));
      const auto key = std::minmax(a, b);
      if (auto it = seen.find(key); it != seen.end() && it->second != hz) {
        throw ParseError(fmt::format("asymmetric J entry between spins {} and {}: {} vs {} Hz",
                                     key.first, key.second, it->second, hz));
      }
      seen[key] = hz;
      j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = hz;
      j(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = hz;
    }
  }

  std::optional<std::vector<std::vector<std::size_t>>> groups;
  if (doc.contains("equivalence_groups")) {
    const json& g = doc.at("equivalence_groups");
    if (!g.is_array()) throw ParseError("\"equivalence_groups\" must be an array of index arrays");
    groups.emplace();
    for (const auto& members : g) {
      if (!members.is_array()) throw ParseError("\"equivalence_groups\" entries must be arrays");
      std::vector<std::size_t> list;
      for (const auto& m : members) {
        if (!m.is_number_integer() || m.get<long long>() < 0) {
          throw ParseError("equivalence group members must be non-negative integers");
        }
        list.push_back(m.get<std::size_t>());
      }
      groups->push_back(std::move(list));
    }
  }

  try {
    return {SpinSystem(std::move(spins), std::move(j), field), std::move(groups)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

SpinSystemFile read_spin_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_spin_system(in);
}

std::string sticks_to_json(const StickSpectrum& sticks) {
  ordered arr = ordered::array();
  for (const auto& l : sticks.lines) {
    arr.push_back({{"hz", l.hz}, {"re", l.amplitude.real()}, {"im", l.amplitude.imag()}});
  }
  return arr.dump();
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum,
                        const std::vector<std::pair<std::string, std::string>>& extra_metadata) {
  const auto& m = spectrum.metadata;
  out << fmt::format("# reference_mhz={:.9f}, broadening_hz={:.6f}, solver={}\n", m.reference_mhz,
                     m.broadening_hz, m.solver);
  out << fmt::format("# format_version={}\n", kFormatVersion);
  for (const auto& [k, v] : extra_metadata) out << "# " << k << '=' << v << '\n';
  out << "ppm,hz,intensity\n";
  const double ref = m.reference_mhz;
  for (std::size_t i = spectrum.intensity.size(); i-- > 0;) {
    const double hz = spectrum.grid.at(i);
    const double ppm = ref > 0.0 ? hz / ref : 0.0;
    out << fmt::format("{:.8f},{:.6f},{:.12e}\n", ppm, hz, spectrum.intensity[i]);
  }
}

std::string peak_table_json(const std::vector<Peak>& peaks, double reference_mhz) {
  ordered arr = ordered::array();
  for (const auto& p : peaks) {
    arr.push_back({{"ppm", reference_mhz > 0.0 ? p.hz / reference_mhz : 0.0},
                   {"hz", p.hz},
                   {"height", p.height},
                   {"area", p.area}});
  }
  ordered doc = {{"format_version", kFormatVersion}, {"reference_mhz", reference_mhz}, {"peaks", arr}};
  return doc.dump(2);
}

}  // namespace magsim
