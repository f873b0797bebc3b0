#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "magsim/cluster.hpp"
#include "magsim/eigen_system.hpp"
#include "magsim/errors.hpp"
#include "magsim/exact_solver.hpp"
#include "magsim/hamiltonian.hpp"
#include "magsim/io.hpp"
#include "magsim/parallel.hpp"
#include "magsim/rpa/model.hpp"
#include "magsim/rpa/oracle.hpp"
#include "magsim/sampling.hpp"
#include "magsim/spectrum.hpp"
#include "magsim/su2.hpp"

namespace magsim::cli {
namespace {

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string pick_isotope(const RunConfig& config, const SpinSystem& system) {
  if (!config.detect_isotope.empty()) {
    for (const auto& s : system.isotope_symbols()) {
      if (s == config.detect_isotope) return s;
    }
    throw std::invalid_argument(fmt::format("isotope {} does not occur in the system", config.detect_isotope));
  }
  for (const auto& s : system.isotope_symbols()) {
    if (s == "1H") return s;
  }
  return system.spin(0).isotope.symbol;
}

// Every effective knob, in a fixed order. The worker count is left out so
// outputs stay byte-identical across --threads.
Metadata echo(const RunConfig& c, const std::string& isotope) {
  Metadata m = {{"command", to_string(c.command)}, {"input", c.input}};
  if (c.command == Command::kSimulate || c.command == Command::kConverge) {
    m.emplace_back("detect_isotope", isotope);
    m.emplace_back("broadening_hz", fmt::format("{}", c.broadening_hz));
    m.emplace_back("grid", c.grid ? fmt::format("{}", fmt::join(*c.grid, ",")) : "auto");
  }
  if (c.command == Command::kSimulate) {
    m.emplace_back("solver", to_string(c.solver));
    if (c.solver == Solver::kCluster) {
      m.emplace_back("max_cluster_size", fmt::format("{}", c.max_cluster_size));
      m.emplace_back("weight_threshold", fmt::format("{}", c.weight_threshold));
    }
    if (c.solver == Solver::kSampled) {
      m.emplace_back("samples", c.samples ? fmt::format("{}", *c.samples) : "exhaustive");
      m.emplace_back("seed", fmt::format("{}", c.seed.value_or(0)));
    }
  }
  if (c.command == Command::kConverge) {
    m.emplace_back("sizes", fmt::format("{}", fmt::join(c.sizes, ",")));
    m.emplace_back("weight_threshold", fmt::format("{}", c.weight_threshold));
  }
  if (c.command == Command::kRpaGap) {
    m.emplace_back("boson_max", fmt::format("{}", c.boson_max));
    m.emplace_back("validity_threshold", fmt::format("{}", c.validity_threshold));
  }
  m.emplace_back("strict", c.strict ? "true" : "false");
  return m;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}
  std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }
  void commit() {
    if (path_.empty()) return;
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path_);
    f << buffer_.str();
  }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ostringstream buffer_;
};

FrequencyGrid grid_for(const RunConfig& c, const StickSpectrum& sticks) {
  if (!c.grid) return auto_grid(sticks, c.broadening_hz);
  const auto& g = *c.grid;
  if (g.size() != 3 || !(g[1] > g[0]) || g[2] < 2 || g[2] != std::floor(g[2])) {
    throw std::invalid_argument("--grid expects start,stop,points with stop > start and points >= 2");
  }
  return {g[0], g[1], static_cast<std::size_t>(g[2])};
}

StickSpectrum solve(const RunConfig& c, const SpinSystemFile& file, const ReferenceFrame& frame,
                    const std::string& isotope, std::ostream& err) {
  const SpinSystem& system = file.system;
  switch (c.solver) {
    case Solver::kExact:
      return simulate_exact(system, frame, isotope);
    case Solver::kCluster: {
      const ClusterPartition partition = build_partition(system, c.max_cluster_size, c.weight_threshold);
      return simulate_clusters(system, partition, frame, isotope);
    }
    case Solver::kSymmetry: {
      const auto groups = file.equivalence_groups ? make_equivalence_groups(system, *file.equivalence_groups)
                                                  : detect_equivalence_groups(system);
      return simulate_symmetric(system, groups, frame, isotope).sticks;
    }
    case Solver::kSampled: {
      if (system.size() > kMaxExactSpins) {
        throw CapacityError(fmt::format("sampled solver: {} spins exceed the exact capacity of {}",
                                        system.size(), kMaxExactSpins),
                            std::size_t{1} << std::min<std::size_t>(system.size(), 63));
      }
      const SiteModel model = site_model(system, frame);
      const ProductSpace space = model.space();
      const auto detected = model.sites_of_isotope(isotope);
      const Detection det = detection_operators(space, detected, detected);
      const EigenSystem eigen = eigendecompose(site_model_hamiltonian(model));
      SampledSpectrum sampled = sampled_expectation(eigen, det.detect, system.size(), detected, c.samples, *c.seed);
      sampled.sticks.detected_isotope = isotope;
      normalize_to_spin_count(sampled.sticks, std::ldexp(1.0, static_cast<int>(system.size())));
      if (!sampled.exhaustive) {
        double worst = 0.0;
        for (const auto& se : sampled.standard_error) worst = std::max(worst, std::abs(se));
        err << fmt::format("NOTE: {} samples, largest raw line standard error {:.3e}\n", sampled.samples, worst);
      }
      return merge_degenerate(sampled.sticks, kMergeToleranceHz);
    }
  }
  throw std::logic_error("unknown solver");
}

void run_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.solver == Solver::kSampled && !c.seed) throw std::invalid_argument("--seed is required with --solver sampled");
  const SpinSystemFile file = read_spin_system(c.input);
  const std::string isotope = pick_isotope(c, file.system);
  const ReferenceFrame frame = ReferenceFrame::larmor(file.system);
  const StickSpectrum sticks = solve(c, file, frame, isotope, err);

  BroadenResult res = broaden(sticks, grid_for(c, sticks), c.broadening_hz, c.strict);
  for (const auto& w : res.warnings) err << "WARNING: " << w << '\n';
  res.spectrum.metadata.reference_mhz = frame.carrier_hz(isotope) * 1e-6;
  res.spectrum.metadata.broadening_hz = c.broadening_hz;
  res.spectrum.metadata.solver = to_string(c.solver);

  Sink sink(c.output, out);
  write_spectrum_csv(sink.stream(), res.spectrum, echo(c, isotope));
  sink.commit();
  if (!c.peaks_output.empty()) {
    Sink peaks(c.peaks_output, out);
    peaks.stream() << peak_table_json(peak_table(res.spectrum, 0.01), res.spectrum.metadata.reference_mhz) << '\n';
    peaks.commit();
  }
}

void run_converge(const RunConfig& c, std::ostream& out) {
  if (c.sizes.empty()) throw std::invalid_argument("--sizes needs at least one cluster size");
  const SpinSystemFile file = read_spin_system(c.input);
  const std::string isotope = pick_isotope(c, file.system);
  const ReferenceFrame frame = ReferenceFrame::larmor(file.system);
  const ConvergenceStudy study =
      convergence_study(file.system, c.sizes, c.weight_threshold, frame, isotope, c.broadening_hz);

  Sink sink(c.output, out);
  std::ostream& os = sink.stream();
  os << fmt::format("# format_version={}\n", kFormatVersion);
  for (const auto& [k, v] : echo(c, isotope)) os << "# " << k << '=' << v << '\n';
  os << "max_cluster_size,largest_cluster,l1_distance_to_previous\n";
  for (const auto& row : study.rows) {
    os << fmt::format("{},{},{:.10e}\n", row.max_cluster_size, row.largest_cluster, row.distance_to_previous);
  }
  sink.commit();
}

void run_rpa_gap(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const rpa::IntegralSet ints = rpa::read_integrals(c.input);
  const rpa::RpaBuild build = rpa::build_rpa_model(ints, c.validity_threshold);
  const rpa::StaticGap gap = rpa::static_gap(build.model);
  const double bare = rpa::bare_gap(build.model);

  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < build.model.n_modes(); ++i) {
    const auto& md = build.model.modes[i];
    modes.push_back({{"m", md.m + 1},
                     {"alpha", md.alpha + 1},
                     {"omega_hartree", md.omega},
                     {"exchange_ratio", build.validity.exchange_ratio[i]},
                     {"density_ratio", build.validity.density_ratio[i]}});
  }
  nlohmann::ordered_json report;
  report["format_version"] = kFormatVersion;
  report["gap_hartree"] = gap.gap;
  report["gap_kcal_mol"] = gap.gap * rpa::kHartreeToKcalMol;
  report["bare_gap_hartree"] = bare;
  report["rpa_correction_hartree"] = gap.gap - bare;
  report["n_modes"] = build.model.n_modes();
  report["validity"] = {{"threshold", build.validity.threshold},
                        {"pass", build.validity.pass},
                        {"max_exchange_ratio", build.validity.max_exchange_ratio},
                        {"max_density_ratio", build.validity.max_density_ratio},
                        {"modes", modes}};
  try {
    const double oracle = rpa::oracle_gap(build.model, c.boson_max);
    report["oracle"] = {{"boson_max", c.boson_max}, {"gap_hartree", oracle}};
  } catch (const CapacityError& e) {
    err << "WARNING: truncated-boson check skipped: " << e.what() << '\n';
    report["oracle"] = nullptr;
  }
  nlohmann::ordered_json config;
  for (const auto& [k, v] : echo(c, "")) config[k] = v;
  report["config"] = config;

  if (!build.validity.pass) {
    const std::string msg = fmt::format(
        "RPA validity ratios exceed {} (exchange {:.4g}, density {:.4g})", build.validity.threshold,
        build.validity.max_exchange_ratio, build.validity.max_density_ratio);
    if (c.strict) throw ValidityError(msg);
    err << "WARNING: " << msg << '\n';
  }
  Sink sink(c.output, out);
  sink.stream() << report.dump(2) << '\n';
  sink.commit();
}

std::size_t grouped_spins(const std::vector<EquivalenceGroup>& groups) {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.members.size() >= 2 ? g.members.size() : 0;
  return n;
}

bool looks_like_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  char ch = 0;
  while (in.get(ch)) {
    if (!std::isspace(static_cast<unsigned char>(ch))) return ch == '{';
  }
  return false;
}

void run_validate(const RunConfig& c, std::ostream& out) {
  Sink sink(c.output, out);
  std::ostream& os = sink.stream();
  if (looks_like_json(c.input)) {
    const SpinSystemFile file = read_spin_system(c.input);
    const SpinSystem& system = file.system;
    const auto groups = file.equivalence_groups ? make_equivalence_groups(system, *file.equivalence_groups)
                                                : detect_equivalence_groups(system);
    std::size_t couplings = 0;
    for (std::size_t k = 0; k < system.size(); ++k)
      for (std::size_t l = k + 1; l < system.size(); ++l) couplings += system.coupling_hz(k, l) != 0.0;
    os << "OK\n";
    os << fmt::format("spins={} couplings={} field_tesla={}\n", system.size(), couplings, system.field_tesla());
    os << fmt::format("isotopes={}\n", fmt::join(system.isotope_symbols(), ","));
    os << fmt::format("equivalence_groups={} ({})\n", groups.size(),
                      file.equivalence_groups ? "declared" : "detected");
    for (const auto& g : groups) {
      if (g.members.size() < 2) continue;
      os << fmt::format("  group {} x{} shift_ppm={} members={}\n", g.isotope, g.members.size(), g.common_shift_ppm,
                        fmt::join(g.members, ","));
    }
    std::uint64_t sectors = 1, largest = std::uint64_t{1} << (system.size() - grouped_spins(groups));
    for (const auto& g : groups) {
      if (g.members.size() < 2) continue;
      const auto d = decompose_group(g.members.size());
      sectors *= d.sectors.size();
      largest *= static_cast<std::uint64_t>(d.sectors.front().twice_j + 1);
    }
    os << fmt::format("symmetry_sectors={} largest_sector_dimension={} exact_dimension=2^{}\n", sectors, largest,
                      system.size());
  } else {
    const rpa::IntegralSet ints = rpa::read_integrals(c.input);
    os << "OK\n";
    os << fmt::format("orbitals={} occupied={} empty={}\n", ints.n_orbitals(), ints.occupied().size(),
                      ints.empty().size());
    os << fmt::format("modes={} symmetry_deviation={:.3e}\n", ints.occupied().size() * ints.empty().size(),
                      ints.symmetry_deviation());
  }
  sink.commit();
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::kSimulate: return "simulate";
    case Command::kConverge: return "converge";
    case Command::kRpaGap: return "rpa-gap";
    case Command::kValidate: return "validate";
  }
  return "?";
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::kExact: return "exact";
    case Solver::kCluster: return "cluster";
    case Solver::kSymmetry: return "symmetry";
    case Solver::kSampled: return "sampled";
  }
  return "?";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    set_worker_threads(config.threads);
    switch (config.command) {
      case Command::kSimulate: run_simulate(config, out, err); break;
      case Command::kConverge: run_converge(config, out); break;
      case Command::kRpaGap: run_rpa_gap(config, out, err); break;
      case Command::kValidate: run_validate(config, out); break;
    }
    return 0;
  } catch (const CapacityError& e) {
    err << fmt::format("ERROR[{}]: {} (dimension {})\n", static_cast<int>(e.code()), e.what(), e.dimension());
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    err << fmt::format("ERROR[{}]: {}\n", static_cast<int>(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const std::invalid_argument& e) {
    err << fmt::format("ERROR[1]: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    err << fmt::format("ERROR[1]: {}\n", e.what());
    return 1;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"magsim: NMR spin-dynamics spectra and diradical singlet-triplet gaps"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  std::string command;
  std::string solver = "exact";
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::vector<double> grid;
  bool convergence_study = false;
  app.add_option("command", command, "simulate | converge | rpa-gap | validate")
      ->required()
      ->check(CLI::IsMember({"simulate", "converge", "rpa-gap", "validate"}));
  app.add_option("input", c.input, "spin-system JSON or integral file")->required();
  app.add_option("--solver", solver, "exact | cluster | symmetry | sampled")
      ->check(CLI::IsMember({"exact", "cluster", "symmetry", "sampled"}));
  app.add_option("--output,-o", c.output, "output file (default: standard output)");
  app.add_option("--detect", c.detect_isotope, "detected isotope (default: 1H if present)");
  app.add_option("--broadening-hz", c.broadening_hz, "Lorentzian FWHM in Hz")->check(CLI::PositiveNumber);
  app.add_option("--grid", grid, "start,stop,points of the frequency grid in Hz")->delimiter(',')->expected(3);
  app.add_option("--max-cluster-size", c.max_cluster_size, "largest cluster for the cluster solver")
      ->check(CLI::Range(std::size_t{1}, kMaxExactSpins));
  app.add_option("--weight-threshold", c.weight_threshold, "smallest edge weight joined into a cluster")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sizes", c.sizes, "cluster sizes for converge")->delimiter(',');
  app.add_flag("--convergence-study", convergence_study, "run the converge command on the input");
  app.add_option("--samples", samples, "Monte Carlo samples (default: exhaustive)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed (required for --solver sampled)");
  app.add_option("--boson-max", c.boson_max, "boson truncation of the oracle check")->check(CLI::Range(0, 64));
  app.add_option("--validity-threshold", c.validity_threshold, "largest accepted RPA validity ratio")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
  app.add_flag("--strict", c.strict, "turn validity and grid-coverage warnings into errors");
  app.add_option("--peaks", c.peaks_output, "write a peak table (JSON) for simulate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << fmt::format("ERROR[1]: {}\n", msg);
    return 1;
  }

  if (command == "simulate") c.command = convergence_study ? Command::kConverge : Command::kSimulate;
  if (command == "converge") c.command = Command::kConverge;
  if (command == "rpa-gap") c.command = Command::kRpaGap;
  if (command == "validate") c.command = Command::kValidate;
  if (solver == "exact") c.solver = Solver::kExact;
  if (solver == "cluster") c.solver = Solver::kCluster;
  if (solver == "symmetry") c.solver = Solver::kSymmetry;
  if (solver == "sampled") c.solver = Solver::kSampled;
  c.samples = samples;
  c.seed = seed;
  if (!grid.empty()) c.grid = grid;
  return run(c, out, err);
}

}  // namespace magsim::cli
