// Benchmark: the OpenMP-parallel sweep path against the serial reference.
//
// Both paths must produce field-identical summaries (the parallel code only
// distributes trials; per-trial work and aggregation order are fixed), so
// this doubles as an equivalence check.  Exit 1 on any mismatch.
//
// Usage: bench_sweep [trials] [seed]

#include <chrono>
#include <iostream>
#include <string>

#include "ssalab/inequalities.hpp"
#include "ssalab/parallel.hpp"
#include "ssalab/report_io.hpp"

using namespace ssalab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct BenchCase {
  std::string name;
  InequalityKind kind;
  int trials;
  RankRange ranks;
};

}  // namespace

int main(int argc, char** argv) {
  const int base_trials = argc > 1 ? std::stoi(argv[1]) : 200;
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 42;
  const SubsystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});

  // One entropy-bound case (cheap per trial, scheduling-dominated) and one
  // optimizer-heavy case (discord/EoF per trial, compute-dominated).
  const BenchCase cases[] = {
      {"ssa", InequalityKind::StrongSubadditivity, base_trials, {1, 8}},
      {"maxBound", InequalityKind::MaxBound, std::max(1, base_trials / 20), {1, 4}},
  };

  std::cout << "threads available: " << max_threads() << "\n";
  bool all_equal = true;
  for (const BenchCase& bc : cases) {
    OptimizerConfig cfg;
    auto start = std::chrono::steady_clock::now();
    const SweepSummary serial =
        sweep_random(bc.kind, bc.trials, layout, bc.ranks, seed, cfg, "", ExecPolicy::Serial);
    const double t_serial = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const SweepSummary parallel =
        sweep_random(bc.kind, bc.trials, layout, bc.ranks, seed, cfg, "", ExecPolicy::Parallel);
    const double t_parallel = seconds_since(start);

    const bool equal = summary_to_json(serial) == summary_to_json(parallel);
    all_equal = all_equal && equal;
    std::cout << bc.name << ": trials=" << bc.trials << " serial=" << t_serial
              << "s parallel=" << t_parallel
              << "s speedup=" << (t_parallel > 0 ? t_serial / t_parallel : 0.0)
              << " identical=" << (equal ? "yes" : "NO") << "\n";
  }
  return all_equal ? 0 : 1;
}
