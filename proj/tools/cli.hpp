#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace magsim::cli {

enum class Command { kSimulate, kConverge, kRpaGap, kValidate };
enum class Solver { kExact, kCluster, kSymmetry, kSampled };

struct RunConfig {
  Command command = Command::kSimulate;
  std::string input;
  Solver solver = Solver::kExact;
  std::string output;  // empty writes to the output stream
  std::string detect_isotope;  // empty: 1H if present, else the first spin's isotope
  double broadening_hz = 10.0;
  // start, stop (Hz) and point count; empty: sized from the sticks.
  std::optional<std::vector<double>> grid;
  std::size_t max_cluster_size = 8;
  double weight_threshold = 0.0;
  std::vector<std::size_t> sizes = {6, 8, 10};
  std::optional<std::size_t> samples;  // empty: exhaustive enumeration
  std::optional<std::uint64_t> seed;
  std::size_t boson_max = 8;
  double validity_threshold = 0.25;
  unsigned threads = 1;
  bool strict = false;
  std::string peaks_output;  // optional peak-table JSON for simulate
};

// Executes one command. Artifacts go to config.output (or `out`),
// diagnostics to `err` as single "ERROR[code]: ..." lines. Returns the
// process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (flags override a --config key=value file, which overrides
// defaults) and calls run().
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

std::string to_string(Command c);
std::string to_string(Solver s);

}  // namespace magsim::cli
