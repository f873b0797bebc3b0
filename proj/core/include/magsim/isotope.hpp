#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace magsim {

struct Isotope {
  std::string symbol;         // "1H", "13C", "31P", ...
  double gyromagnetic_ratio;  // rad s^-1 T^-1
  double spin = 0.5;
};

// Throws std::invalid_argument for symbols outside the built-in table.
const Isotope& isotope_by_symbol(std::string_view symbol);

const std::vector<Isotope>& known_isotopes();

// Bare Larmor frequency |gamma| B / 2pi in Hz.
double larmor_frequency_hz(const Isotope& isotope, double field_tesla);

}  // namespace magsim
