#include <benchmark/benchmark.h>

#include <random>

#include "magsim/cluster.hpp"
#include "magsim/exact_solver.hpp"
#include "magsim/io.hpp"
#include "magsim/rpa/integrals.hpp"
#include "magsim/rpa/model.hpp"
#include "magsim/rpa/oracle.hpp"
#include "magsim/spectrum.hpp"
#include "magsim/su2.hpp"

namespace {

using namespace magsim;

std::string data(const char* name) { return std::string(MAGSIM_BENCH_DATA_DIR) + "/" + name; }

// Coupled proton chain with ring closures, shifts spread over 3 ppm.
SpinSystem proton_network(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> shift(0.5, 3.5), coupling(-15.0, 15.0);
  std::vector<Spin> spins;
  for (std::size_t k = 0; k < n; ++k) spins.push_back({isotope_by_symbol("1H"), shift(rng)});
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = k + 1; l < std::min(m, k + 3); ++l) j(k, l) = j(l, k) = coupling(rng);
  return SpinSystem(spins, j, 9.4);
}

void BM_ExactSolver(benchmark::State& state) {
  const SpinSystem sys = proton_network(static_cast<std::size_t>(state.range(0)));
  const ReferenceFrame frame = ReferenceFrame::larmor(sys);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_exact(sys, frame, "1H"));
}
BENCHMARK(BM_ExactSolver)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ClusterSolver50(benchmark::State& state) {
  const SpinSystem sys = read_spin_system(data("representative_50.json")).system;
  const ReferenceFrame frame = ReferenceFrame::larmor(sys);
  const ClusterPartition p = build_partition(sys, static_cast<std::size_t>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_clusters(sys, p, frame, "1H"));
}
BENCHMARK(BM_ClusterSolver50)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SymmetricSolver22(benchmark::State& state) {
  const SpinSystem sys = read_spin_system(data("diphosphane_22.json")).system;
  const ReferenceFrame frame = ReferenceFrame::larmor(sys);
  const auto groups = detect_equivalence_groups(sys);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_symmetric(sys, groups, frame, "1H"));
}
BENCHMARK(BM_SymmetricSolver22)->Unit(benchmark::kMillisecond);

void BM_Broaden(benchmark::State& state) {
  const SpinSystem sys = proton_network(8);
  const StickSpectrum sticks = simulate_exact(sys, ReferenceFrame::larmor(sys), "1H");
  const FrequencyGrid grid = auto_grid(sticks, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(broaden(sticks, grid, 1.0));
  state.counters["lines"] = static_cast<double>(sticks.lines.size());
  state.counters["points"] = static_cast<double>(grid.points);
}
BENCHMARK(BM_Broaden)->Unit(benchmark::kMillisecond);

void BM_FftSpectrum(benchmark::State& state) {
  const SpinSystem sys = proton_network(6);
  const StickSpectrum sticks = simulate_exact(sys, ReferenceFrame::larmor(sys), "1H");
  const Fid fid = fid_from_sticks(sticks, 1.0 / 4000.0, static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(fft_spectrum(fid));
}
BENCHMARK(BM_FftSpectrum)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

void BM_RpaOracle(benchmark::State& state) {
  const rpa::RpaModel model = rpa::build_rpa_model(rpa::read_integrals(data("toy_4orb.fcidump"))).model;
  for (auto _ : state) benchmark::DoNotOptimize(rpa::oracle_gap(model, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_RpaOracle)->Arg(8)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
