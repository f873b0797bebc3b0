#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "magsim/spectrum.hpp"
#include "magsim/spin_system.hpp"
#include "magsim/sticks.hpp"

namespace magsim {

inline constexpr int kFormatVersion = 1;

struct SpinSystemFile {
  SpinSystem system;
  // Explicit "equivalence_groups" override, when present.
  std::optional<std::vector<std::vector<std::size_t>>> equivalence_groups;
};

// Spin-system JSON:
//   { "field_tesla": 9.4,
//     "spins": [{"isotope": "1H", "shift_ppm": 1.0}, ...],
//     "j_couplings": [{"i": 0, "j": 1, "hz": 7.0}, ...],
//     "equivalence_groups": [[0, 1, 2]] }          (optional)
// Unlisted pairs have J = 0. Throws ParseError with a description of the
// first problem found.
SpinSystemFile parse_spin_system(std::istream& in);
SpinSystemFile read_spin_system(const std::filesystem::path& path);

// [{"hz": ..., "re": ..., "im": ...}, ...]
std::string sticks_to_json(const StickSpectrum& sticks);

// CSV with "# key=value" comment lines and "ppm,hz,intensity" rows in
// descending ppm order. extra_metadata is echoed as additional comments.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum,
                        const std::vector<std::pair<std::string, std::string>>& extra_metadata = {});

// {"format_version": 1, "reference_mhz": ..., "peaks": [{"ppm","hz","height","area"}]}
std::string peak_table_json(const std::vector<Peak>& peaks, double reference_mhz);

}  // namespace magsim
