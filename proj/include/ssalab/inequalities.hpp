#pragma once

// Entropy-inequality evaluation and randomized sweeps.
//
// An inequality is evaluated as lhs >= rhs with margin = lhs - rhs.  Each
// kind carries a default numerical slack chosen from the error budget of
// the terms it uses: exact-entropy inequalities get a tight slack, while
// inequalities built from optimized correlation measures get a looser one
// that absorbs the optimizer's one-sided error.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssalab/measures.hpp"
#include "ssalab/parallel.hpp"
#include "ssalab/states.hpp"

namespace ssalab {

enum class InequalityKind {
  WeakSubadditivity,        // S(A) + S(B) >= S(AB)
  StrongSubadditivity,      // I(A:C|B) >= 0
  BoundedSsa,               // I(A:C|B) >= delta-tilde
  MaxBound,                 // I(A:C|B) >= max(0, delta-tilde)
  KoashiWinter,             // discord(A|C) + S(A|C) >= E(A:B)
  BoundedWeakMonotonicity,  // S(AB) + S(AC) - S(B) - S(C) >= delta (pure)
  Conservation,             // delta == 0 for pure tripartite states
};

enum class Verdict { Satisfied, WithinSlack, ViolatedBeyondSlack };

std::string to_string(InequalityKind kind);
std::string to_string(Verdict verdict);
InequalityKind inequality_kind_from_string(const std::string& name);

// Default numerical slack for a given inequality kind.
double default_slack(InequalityKind kind);

struct InequalityReport {
  InequalityKind kind = InequalityKind::StrongSubadditivity;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  double slack = 0.0;
  Verdict verdict = Verdict::Satisfied;
  std::string input_digest;
  std::map<std::string, double> diagnostics;
};

// Evaluates one inequality on a state partitioned into the given groups
// (two groups for weak subadditivity and Koashi-Winter, three otherwise).
// slack < 0 selects the kind's default.
InequalityReport evaluate_inequality(InequalityKind kind, const DensityMatrix& rho,
                                     const std::vector<std::vector<std::string>>& groups,
                                     const OptimizerConfig& config = {}, double slack = -1.0,
                                     CorrelationRoute route = CorrelationRoute::Auto);

struct HistogramBucket {
  double low = 0.0;
  double high = 0.0;
  std::int64_t count = 0;
};

std::vector<HistogramBucket> make_histogram(const std::vector<double>& values, int buckets);

struct RankRange {
  int low = 1;
  int high = 1;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  int rank = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::Satisfied;
  std::optional<double> delta_tilde;
};

struct SweepSummary {
  InequalityKind kind = InequalityKind::StrongSubadditivity;
  int trials = 0;
  int violations = 0;
  double min_margin = 0.0;
  std::optional<double> max_delta_tilde;
  std::vector<std::uint64_t> violation_seeds;
  std::vector<HistogramBucket> margin_histogram;
  std::vector<HistogramBucket> delta_tilde_histogram;  // bounded-SSA kinds only
  std::vector<TrialRecord> records;
  bool aborted_early = false;
};

// Runs `trials` random-state evaluations of one inequality on states drawn
// over `layout` with ranks sampled uniformly from `ranks`.  Trial t uses the
// deterministic seed derive_seed(master_seed, t).  A violation beyond slack
// aborts the sweep early; if dump_dir is non-empty the offending state is
// written there as a state file named by its seed.
SweepSummary sweep_random(InequalityKind kind, int trials, const SubsystemLayout& layout,
                          RankRange ranks, std::uint64_t master_seed,
                          const OptimizerConfig& config = {}, const std::string& dump_dir = "",
                          ExecPolicy policy = ExecPolicy::Parallel, double slack = -1.0,
                          CorrelationRoute route = CorrelationRoute::Auto);

struct DeltaTildeHit {
  std::string digest;
  double delta_tilde = 0.0;
  double cmi = 0.0;
  DensityMatrix state;
};

struct DeltaTildeSearchResult {
  int trials = 0;
  std::vector<DeltaTildeHit> hits;
};

// Samples random tripartite states hunting for a strictly positive
// correlation balance (delta-tilde beyond the bounded-SSA slack), i.e.
// states where the bounded inequality is strictly stronger than plain
// strong subadditivity.  Hits are optionally written to out_dir.
DeltaTildeSearchResult search_positive_delta_tilde(const SubsystemLayout& layout, int budget,
                                                   std::uint64_t master_seed,
                                                   const OptimizerConfig& config = {},
                                                   RankRange ranks = {1, 4},
                                                   const std::string& out_dir = "",
                                                   ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace ssalab
