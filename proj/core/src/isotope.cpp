#include "magsim/isotope.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magsim {

const std::vector<Isotope>& known_isotopes() {
  // IUPAC recommended values (Harris et al. 2001), spin-1/2 nuclei only.
  static const std::vector<Isotope> table = {
      {"1H", 26.7522128e7, 0.5},   {"3H", 28.5349779e7, 0.5},
      {"13C", 6.728284e7, 0.5},    {"15N", -2.712618e7, 0.5},
      {"19F", 25.18148e7, 0.5},    {"29Si", -5.3190e7, 0.5},
      {"31P", 10.8394e7, 0.5},     {"77Se", 5.1253857e7, 0.5},
      {"103Rh", -0.8468e7, 0.5},   {"119Sn", -10.0317e7, 0.5},
      {"195Pt", 5.8385e7, 0.5},
  };
  return table;
}

const Isotope& isotope_by_symbol(std::string_view symbol) {
  for (const auto& iso : known_isotopes()) {
    if (iso.symbol == symbol) return iso;
  }
  throw std::invalid_argument("unknown or unsupported isotope '" + std::string(symbol) + "'");
}

double larmor_frequency_hz(const Isotope& isotope, double field_tesla) {
  return std::abs(isotope.gyromagnetic_ratio) * field_tesla / (2.0 * std::numbers::pi);
}

}  // namespace magsim
