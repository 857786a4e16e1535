// Tests for inequality evaluation, verdict assignment, randomized sweeps,
// and the report serialization layer.  Deterministic verdict fixtures rely
// on exact structural states (GHZ, Bell, the exact-Markov construction)
// whose margins are either large by closed form or pinned near zero by
// construction.
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ssalab/inequalities.hpp"
#include "ssalab/measures.hpp"
#include "ssalab/report_io.hpp"
#include "ssalab/states.hpp"
#include "ssalab/tensor.hpp"

using namespace ssalab;

namespace {

const std::vector<InequalityKind> kAllKinds = {
    InequalityKind::WeakSubadditivity,
    InequalityKind::StrongSubadditivity,
    InequalityKind::BoundedSsa,
    InequalityKind::MaxBound,
    InequalityKind::KoashiWinter,
    InequalityKind::BoundedWeakMonotonicity,
    InequalityKind::Conservation,
};

SubsystemLayout three_qubits() {
  return SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}});
}

std::vector<std::vector<std::string>> abc() {
  return {{"A"}, {"B"}, {"C"}};
}

// One-block exact-Markov spec small enough for formation-entanglement
// estimation: B = bL (x) bR with dims 1 x 2, so the full state is three
// qubits wide on (A, B, C).
MarkovStateSpec small_markov_spec() {
  MarkovStateSpec spec;
  spec.dim_a = 2;
  spec.dim_c = 2;
  MarkovBlock blk;
  blk.weight = 1.0;
  blk.left_dim = 1;
  blk.right_dim = 2;
  blk.left_state = random_mixed_state(SubsystemLayout({{"L", 2}}), 2, 7).mat;
  blk.right_state = random_mixed_state(SubsystemLayout({{"R", 4}}), 3, 8).mat;
  spec.blocks.push_back(blk);
  return spec;
}

}  // namespace

TEST_CASE("kind and verdict names round-trip") {
  for (InequalityKind kind : kAllKinds) {
    CHECK(inequality_kind_from_string(to_string(kind)) == kind);
  }
  CHECK(to_string(InequalityKind::MaxBound) == "maxBound");
  CHECK(to_string(InequalityKind::BoundedSsa) == "bssa");
  CHECK(to_string(Verdict::Satisfied) == "satisfied");
  CHECK(to_string(Verdict::WithinSlack) == "withinSlack");
  CHECK(to_string(Verdict::ViolatedBeyondSlack) == "violatedBeyondSlack");
  CHECK_THROWS_AS((void)inequality_kind_from_string("nope"),
                  std::invalid_argument);
}

TEST_CASE("default slacks separate exact from optimized inequalities") {
  CHECK(default_slack(InequalityKind::WeakSubadditivity) == 1e-9);
  CHECK(default_slack(InequalityKind::StrongSubadditivity) == 1e-9);
  CHECK(default_slack(InequalityKind::BoundedSsa) == 2e-3);
  CHECK(default_slack(InequalityKind::MaxBound) == 2e-3);
  CHECK(default_slack(InequalityKind::KoashiWinter) == 2e-3);
  CHECK(default_slack(InequalityKind::BoundedWeakMonotonicity) == 2e-3);
  CHECK(default_slack(InequalityKind::Conservation) == 3e-3);
}

TEST_CASE("verdicts: satisfied, within slack, violated beyond slack") {
  OptimizerConfig cfg;
  cfg.seed = 2;

  DensityMatrix ghz = make_ghz_state();
  InequalityReport sat = evaluate_inequality(
      InequalityKind::StrongSubadditivity, ghz, abc(), cfg);
  CHECK(sat.margin == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sat.verdict == Verdict::Satisfied);
  CHECK_FALSE(sat.input_digest.empty());

  // The exact-Markov construction has cmi = 0 up to arithmetic noise; this
  // particular spec lands a hair below zero, exercising the slack band.
  DensityMatrix markov = make_markov_state(random_markov_spec(2));
  InequalityReport within = evaluate_inequality(
      InequalityKind::StrongSubadditivity, markov, abc(), cfg);
  REQUIRE(within.margin < 0.0);
  REQUIRE(within.margin > -1e-12);
  CHECK(within.verdict == Verdict::WithinSlack);

  InequalityReport violated = evaluate_inequality(
      InequalityKind::StrongSubadditivity, markov, abc(), cfg, 0.0);
  CHECK(violated.verdict == Verdict::ViolatedBeyondSlack);

  // Conservation treats the slack band as satisfied (the balance is an
  // equality, so any |margin| below slack counts as holding).
  DensityMatrix w = make_named_state("w");
  InequalityReport cons = evaluate_inequality(InequalityKind::Conservation, w,
                                              abc(), cfg);
  REQUIRE(cons.margin < 0.0);
  CHECK(cons.verdict == Verdict::Satisfied);
  InequalityReport cons0 = evaluate_inequality(InequalityKind::Conservation, w,
                                               abc(), cfg, 0.0);
  CHECK(cons0.verdict == Verdict::ViolatedBeyondSlack);
}

TEST_CASE("per-kind evaluation on structured states") {
  OptimizerConfig cfg;
  cfg.seed = 5;
  DensityMatrix ghz = make_ghz_state();
  DensityMatrix bell = make_bell_state();

  InequalityReport wsa = evaluate_inequality(
      InequalityKind::WeakSubadditivity, bell, {{"A"}, {"B"}}, cfg);
  CHECK(wsa.lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(wsa.rhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(wsa.margin == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(wsa.diagnostics.count("entropyA") == 1);

  // GHZ: cmi = 1 while the interpolated balance vanishes.
  InequalityReport bssa =
      evaluate_inequality(InequalityKind::BoundedSsa, ghz, abc(), cfg);
  CHECK(bssa.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(bssa.rhs) <= 2e-3);
  CHECK(bssa.verdict == Verdict::Satisfied);
  CHECK(bssa.diagnostics.count("deltaTilde") == 1);
  CHECK(bssa.diagnostics.count("cmi") == 1);

  InequalityReport mb =
      evaluate_inequality(InequalityKind::MaxBound, ghz, abc(), cfg);
  CHECK(mb.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mb.rhs >= 0.0);  // clipped at zero
  CHECK(mb.rhs <= 2e-3);

  // Pure tripartite states saturate the purification identity exactly.
  InequalityReport kw =
      evaluate_inequality(InequalityKind::KoashiWinter, ghz, abc(), cfg);
  CHECK(std::abs(kw.margin) <= 2e-3);
  CHECK(kw.diagnostics.count("eofAB") == 1);

  InequalityReport bwm = evaluate_inequality(
      InequalityKind::BoundedWeakMonotonicity, ghz, abc(), cfg);
  CHECK(std::abs(bwm.lhs) <= 1e-9);
  CHECK(std::abs(bwm.margin) <= 2e-3);

  InequalityReport cons =
      evaluate_inequality(InequalityKind::Conservation, ghz, abc(), cfg);
  CHECK(cons.verdict == Verdict::Satisfied);
  CHECK(std::abs(cons.lhs) <= 2e-3);
}

TEST_CASE("evaluation validates arity and purity requirements") {
  OptimizerConfig cfg;
  DensityMatrix ghz = make_ghz_state();
  DensityMatrix mixed = random_mixed_state(three_qubits(), 2, 19);

  CHECK_THROWS_AS((void)evaluate_inequality(InequalityKind::Conservation,
                                            mixed, abc(), cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)evaluate_inequality(InequalityKind::WeakSubadditivity,
                                            ghz, abc(), cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)evaluate_inequality(InequalityKind::StrongSubadditivity, ghz,
                                {{"A"}, {"B"}}, cfg),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)evaluate_inequality(InequalityKind::StrongSubadditivity, ghz,
                                {{"A"}, {"B"}, {"Q"}}, cfg),
      std::invalid_argument);
}

TEST_CASE("exact-Markov states sit on the bounded-inequality floor") {
  // cmi vanishes by construction, so the bounded inequality can only hold
  // through the interpolated balance staying at (or below) zero.
  OptimizerConfig cfg;
  cfg.seed = 3;
  DensityMatrix rho = make_markov_state(small_markov_spec());
  InequalityReport report =
      evaluate_inequality(InequalityKind::MaxBound, rho, abc(), cfg);
  CHECK(std::abs(report.lhs) <= 1e-9);
  CHECK(report.verdict != Verdict::ViolatedBeyondSlack);
  CHECK(report.diagnostics.at("deltaTilde") <= 2e-3);
}

TEST_CASE("sweeps are deterministic and policy-independent") {
  SubsystemLayout layout = three_qubits();
  OptimizerConfig cfg;
  SweepSummary a = sweep_random(InequalityKind::StrongSubadditivity, 40,
                                layout, {1, 8}, 42, cfg);
  SweepSummary b = sweep_random(InequalityKind::StrongSubadditivity, 40,
                                layout, {1, 8}, 42, cfg);
  CHECK(summary_to_json(a) == summary_to_json(b));

  SweepSummary serial =
      sweep_random(InequalityKind::StrongSubadditivity, 40, layout, {1, 8}, 42,
                   cfg, "", ExecPolicy::Serial);
  CHECK(summary_to_json(serial) == summary_to_json(a));

  CHECK(a.trials == 40);
  CHECK(a.violations == 0);
  CHECK(a.min_margin >= -1e-9);
  CHECK(a.records.size() == 40);
  CHECK_FALSE(a.aborted_early);
  CHECK(a.violation_seeds.empty());
  long total = 0;
  for (const HistogramBucket& bucket : a.margin_histogram) total += bucket.count;
  CHECK(total == 40);
}

TEST_CASE("bounded-kind sweeps carry the balance histogram") {
  OptimizerConfig cfg;
  cfg.restarts = 6;
  SweepSummary s = sweep_random(InequalityKind::MaxBound, 6, three_qubits(),
                                {1, 4}, 11, cfg);
  CHECK(s.trials == 6);
  REQUIRE(s.max_delta_tilde.has_value());
  CHECK_FALSE(s.delta_tilde_histogram.empty());
  double max_seen = -1e300;
  for (const TrialRecord& rec : s.records) {
    REQUIRE(rec.delta_tilde.has_value());
    max_seen = std::max(max_seen, *rec.delta_tilde);
    CHECK(rec.rank >= 1);
    CHECK(rec.rank <= 4);
  }
  CHECK(*s.max_delta_tilde == doctest::Approx(max_seen));
}

TEST_CASE("sweep abort path records the first violation and its dump") {
  namespace fs = std::filesystem;
  fs::path dir = fs::path("sweep-abort-dump");
  fs::remove_all(dir);
  fs::create_directories(dir);

  // Conservation margins are ~ -1e-16 on pure states, so an absurd slack
  // turns every trial into a violation; the sweep stops at the first one.
  OptimizerConfig cfg;
  SweepSummary s =
      sweep_random(InequalityKind::Conservation, 30, three_qubits(), {1, 1},
                   123, cfg, dir.string(), ExecPolicy::Parallel, 1e-30);
  CHECK(s.aborted_early);
  CHECK(s.violations == 1);
  CHECK(s.records.size() == 1);
  REQUIRE(s.violation_seeds.size() == 1);
  CHECK(s.records.front().verdict == Verdict::ViolatedBeyondSlack);

  fs::path dump =
      dir / ("violation-" + std::to_string(s.violation_seeds[0]) + ".json");
  REQUIRE(fs::exists(dump));
  DensityMatrix reloaded = load_state_file(dump.string());
  CHECK(reloaded.layout.total_dim() == 8);
  fs::remove_all(dir);
}

TEST_CASE("empty sweep yields a valid zero-trial summary") {
  SweepSummary s = sweep_random(InequalityKind::StrongSubadditivity, 0,
                                three_qubits(), {1, 8}, 42, {});
  CHECK(s.trials == 0);
  CHECK(s.violations == 0);
  CHECK(s.min_margin == 0.0);
  CHECK(s.records.empty());
  Json doc = summary_to_json(s);
  CHECK(doc.at("trials").get<int>() == 0);
}

TEST_CASE("sweep validates trial count, ranks, and layout arity") {
  SubsystemLayout layout = three_qubits();
  CHECK_THROWS_AS((void)sweep_random(InequalityKind::StrongSubadditivity, -1,
                                     layout, {1, 8}, 1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sweep_random(InequalityKind::StrongSubadditivity, 1,
                                     layout, {0, 8}, 1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sweep_random(InequalityKind::StrongSubadditivity, 1,
                                     layout, {1, 9}, 1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sweep_random(InequalityKind::WeakSubadditivity, 1,
                                     layout, {1, 8}, 1, {}),
                  std::invalid_argument);
}

TEST_CASE("positive-balance search returns bounded, consistent hits") {
  DeltaTildeSearchResult empty = search_positive_delta_tilde(
      three_qubits(), 0, 1, {});
  CHECK(empty.trials == 0);
  CHECK(empty.hits.empty());

  OptimizerConfig cfg;
  cfg.restarts = 6;
  DeltaTildeSearchResult res =
      search_positive_delta_tilde(three_qubits(), 30, 1, cfg);
  CHECK(res.trials == 30);
  for (const DeltaTildeHit& hit : res.hits) {
    CHECK(hit.delta_tilde > 2e-3);
    // The bounded inequality still holds on every hit.
    CHECK(hit.cmi >= hit.delta_tilde - 2e-3);
    CHECK_FALSE(hit.digest.empty());
  }
  Json doc = search_to_json(res);
  CHECK(doc.at("hitCount").get<int>() == static_cast<int>(res.hits.size()));
}

TEST_CASE("report serialization uses the pinned field names") {
  OptimizerConfig cfg;
  cfg.seed = 2;
  DensityMatrix ghz = make_ghz_state();
  InequalityReport report = evaluate_inequality(
      InequalityKind::StrongSubadditivity, ghz, abc(), cfg);
  Json doc = report_to_json(report);
  for (const char* key :
       {"kind", "lhs", "rhs", "margin", "slack", "verdict", "inputDigest",
        "diagnostics"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc.at("kind") == "ssa");
  CHECK(doc.at("verdict") == "satisfied");

  Json with = with_meta(doc, 42);
  CHECK(with.at("meta").at("seed").get<std::uint64_t>() == 42);
  CHECK(with.at("meta").contains("generatedAt"));
  Json stripped = strip_volatile_meta(with);
  CHECK_FALSE(stripped.at("meta").contains("generatedAt"));
  CHECK(stripped.at("meta").at("seed").get<std::uint64_t>() == 42);
}

TEST_CASE("summary serialization: bucket fields, records, csv shape") {
  SweepSummary s = sweep_random(InequalityKind::StrongSubadditivity, 12,
                                three_qubits(), {2, 4}, 7, {});
  Json doc = summary_to_json(s);
  CHECK(doc.at("kind") == "ssa");
  CHECK(doc.at("trials").get<int>() == 12);
  REQUIRE(doc.contains("histogram"));
  REQUIRE(!doc.at("histogram").empty());
  const Json& bucket = doc.at("histogram").at(0);
  CHECK(bucket.contains("bucketLow"));
  CHECK(bucket.contains("bucketHigh"));
  CHECK(bucket.contains("count"));
  CHECK(doc.at("records").size() == 12);

  std::string csv = summary_to_csv(s);
  long lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 13);  // header + one row per trial
  CHECK(csv.rfind("trial,seed,rank,lhs,rhs,margin,verdict", 0) == 0);
}

TEST_CASE("histogram assigns every value to exactly one bucket") {
  std::vector<double> values = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<HistogramBucket> buckets = make_histogram(values, 4);
  REQUIRE(buckets.size() == 4);
  long total = 0;
  for (const HistogramBucket& b : buckets) {
    CHECK(b.high >= b.low);
    total += b.count;
  }
  CHECK(total == 5);
  CHECK(buckets.front().low == doctest::Approx(0.0));
  CHECK(buckets.back().high == doctest::Approx(1.0));

  // Degenerate case: identical values still land in a widened bucket.
  std::vector<HistogramBucket> flat = make_histogram({0.3, 0.3, 0.3}, 3);
  long flat_total = 0;
  for (const HistogramBucket& b : flat) flat_total += b.count;
  CHECK(flat_total == 3);
}
