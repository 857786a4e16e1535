#include "ssalab/inequalities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssalab/rng.hpp"

namespace ssalab {

namespace {

bool needs_three_groups(InequalityKind kind) { return kind != InequalityKind::WeakSubadditivity; }

// Union of the groups, normalized to layout order.
std::vector<std::string> group_union_labels(const SubsystemLayout& layout,
                                            const std::vector<std::vector<std::string>>& groups) {
  std::vector<std::string> flat;
  for (const auto& g : groups) flat.insert(flat.end(), g.begin(), g.end());
  std::vector<int> idx = layout.group_indices(flat);  // validates disjointness
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(layout.label(i));
  return out;
}

std::string single_label(const std::vector<std::string>& group, const char* role) {
  if (group.size() != 1)
    throw std::invalid_argument(std::string(role) +
                                " group must be a single subsystem for this inequality");
  return group.front();
}

}  // namespace

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::WeakSubadditivity: return "wsa";
    case InequalityKind::StrongSubadditivity: return "ssa";
    case InequalityKind::BoundedSsa: return "bssa";
    case InequalityKind::MaxBound: return "maxBound";
    case InequalityKind::KoashiWinter: return "koashiWinter";
    case InequalityKind::BoundedWeakMonotonicity: return "boundedWeakMonotonicity";
    case InequalityKind::Conservation: return "conservation";
  }
  throw std::logic_error("unhandled inequality kind");
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::WithinSlack: return "withinSlack";
    case Verdict::ViolatedBeyondSlack: return "violatedBeyondSlack";
  }
  throw std::logic_error("unhandled verdict");
}

InequalityKind inequality_kind_from_string(const std::string& name) {
  if (name == "wsa") return InequalityKind::WeakSubadditivity;
  if (name == "ssa") return InequalityKind::StrongSubadditivity;
  if (name == "bssa") return InequalityKind::BoundedSsa;
  if (name == "maxBound") return InequalityKind::MaxBound;
  if (name == "koashiWinter") return InequalityKind::KoashiWinter;
  if (name == "boundedWeakMonotonicity") return InequalityKind::BoundedWeakMonotonicity;
  if (name == "conservation") return InequalityKind::Conservation;
  throw std::invalid_argument("unknown inequality kind: " + name);
}

double default_slack(InequalityKind kind) {
  switch (kind) {
    // Pure entropy arithmetic: eigensolver accuracy only.
    case InequalityKind::WeakSubadditivity:
    case InequalityKind::StrongSubadditivity:
      return 1e-9;
    // One side involves optimized correlation measures.
    case InequalityKind::BoundedSsa:
    case InequalityKind::MaxBound:
    case InequalityKind::KoashiWinter:
    case InequalityKind::BoundedWeakMonotonicity:
      return 2e-3;
    // Both sides of the balance carry optimizer error.
    case InequalityKind::Conservation:
      return 3e-3;
  }
  throw std::logic_error("unhandled inequality kind");
}

InequalityReport evaluate_inequality(InequalityKind kind, const DensityMatrix& rho,
                                     const std::vector<std::vector<std::string>>& groups,
                                     const OptimizerConfig& config, double slack,
                                     CorrelationRoute route) {
  const std::size_t arity = needs_three_groups(kind) ? 3 : 2;
  if (groups.size() != arity)
    throw std::invalid_argument(to_string(kind) + " expects " + std::to_string(arity) +
                                " groups");
  // Work on the union so that partial partitions of a larger state are legal.
  const DensityMatrix work = reduced_state(rho, group_union_labels(rho.layout, groups));

  InequalityReport rep;
  rep.kind = kind;
  rep.slack = slack < 0.0 ? default_slack(kind) : slack;
  rep.input_digest = state_digest(work);

  switch (kind) {
    case InequalityKind::WeakSubadditivity: {
      const double sa = subsystem_entropy(work, groups[0]);
      const double sb = subsystem_entropy(work, groups[1]);
      const double sab = von_neumann_entropy(work);
      rep.lhs = sa + sb;
      rep.rhs = sab;
      rep.diagnostics = {{"entropyA", sa}, {"entropyB", sb}, {"entropyAB", sab}};
      break;
    }
    case InequalityKind::StrongSubadditivity: {
      rep.lhs = conditional_mutual_information(work, groups[0], groups[1], groups[2]);
      rep.rhs = 0.0;
      rep.diagnostics = {{"cmi", rep.lhs}};
      break;
    }
    case InequalityKind::BoundedSsa:
    case InequalityKind::MaxBound: {
      const double cmi = conditional_mutual_information(work, groups[0], groups[1], groups[2]);
      const BalanceBreakdown bal =
          balance_delta_tilde(work, groups[0], groups[1], groups[2], config, route);
      rep.lhs = cmi;
      rep.rhs = kind == InequalityKind::BoundedSsa ? bal.value : std::max(0.0, bal.value);
      rep.diagnostics = bal.terms;
      rep.diagnostics["cmi"] = cmi;
      rep.diagnostics["deltaTilde"] = bal.value;
      break;
    }
    case InequalityKind::KoashiWinter: {
      // E(A:B) <= discord(A|C) + S(A|C): entanglement with B is paid for by
      // the quantumness of correlations with the purifying side C.
      const std::vector<std::string> ac = group_union_labels(work.layout, {groups[0], groups[2]});
      const DensityMatrix rho_ac = reduced_state(work, ac);
      const double discord_ac = quantum_discord(rho_ac, groups[2], config).value;
      const double cond_ac =
          subsystem_entropy(work, ac) - subsystem_entropy(work, groups[2]);
      const double eof_ab = eof_auto(work, groups[0], groups[1], config);
      rep.lhs = discord_ac + cond_ac;
      rep.rhs = eof_ab;
      rep.diagnostics = {{"discordAC", discord_ac},
                         {"conditionalEntropyAC", cond_ac},
                         {"eofAB", eof_ab}};
      break;
    }
    case InequalityKind::BoundedWeakMonotonicity: {
      const std::string a = single_label(groups[0], "A");
      const std::string b = single_label(groups[1], "B");
      const std::string c = single_label(groups[2], "C");
      const BalanceBreakdown bal = balance_delta(work, a, b, c, config, route);
      const double sab = subsystem_entropy(work, {a, b});
      const double sac = subsystem_entropy(work, {a, c});
      const double sb = subsystem_entropy(work, {b});
      const double sc = subsystem_entropy(work, {c});
      rep.lhs = sab + sac - sb - sc;
      rep.rhs = bal.value;
      rep.diagnostics = bal.terms;
      rep.diagnostics["delta"] = bal.value;
      break;
    }
    case InequalityKind::Conservation: {
      const std::string a = single_label(groups[0], "A");
      const std::string b = single_label(groups[1], "B");
      const std::string c = single_label(groups[2], "C");
      const BalanceBreakdown bal = balance_delta(work, a, b, c, config, route);
      rep.lhs = -std::abs(bal.value);
      rep.rhs = 0.0;
      rep.diagnostics = bal.terms;
      rep.diagnostics["delta"] = bal.value;
      break;
    }
  }

  rep.margin = rep.lhs - rep.rhs;
  if (rep.margin < -rep.slack) {
    rep.verdict = Verdict::ViolatedBeyondSlack;
  } else if (kind == InequalityKind::Conservation ? rep.margin >= -rep.slack
                                                  : rep.margin >= 0.0) {
    // Conservation is an equality check: |delta| within slack counts as
    // satisfied rather than merely "within slack".
    rep.verdict = Verdict::Satisfied;
  } else {
    rep.verdict = Verdict::WithinSlack;
  }
  return rep;
}

std::vector<HistogramBucket> make_histogram(const std::vector<double>& values, int buckets) {
  std::vector<HistogramBucket> out;
  if (values.empty() || buckets <= 0) return out;
  double low = *std::min_element(values.begin(), values.end());
  double high = *std::max_element(values.begin(), values.end());
  if (high <= low) high = low + 1e-12;
  const double width = (high - low) / buckets;
  out.resize(buckets);
  for (int b = 0; b < buckets; ++b) {
    out[b].low = low + b * width;
    out[b].high = low + (b + 1) * width;
  }
  for (double v : values) {
    int b = static_cast<int>((v - low) / width);
    b = std::clamp(b, 0, buckets - 1);
    ++out[b].count;
  }
  return out;
}

namespace {

constexpr int kHistogramBuckets = 20;

std::vector<std::vector<std::string>> per_part_groups(const SubsystemLayout& layout) {
  std::vector<std::vector<std::string>> groups;
  for (int i = 0; i < layout.part_count(); ++i) groups.push_back({layout.label(i)});
  return groups;
}

}  // namespace

SweepSummary sweep_random(InequalityKind kind, int trials, const SubsystemLayout& layout,
                          RankRange ranks, std::uint64_t master_seed,
                          const OptimizerConfig& config, const std::string& dump_dir,
                          ExecPolicy policy, double slack, CorrelationRoute route) {
  if (trials < 0) throw std::invalid_argument("trial count must be non-negative");
  if (ranks.low < 1 || ranks.high < ranks.low || ranks.high > layout.total_dim())
    throw std::invalid_argument("rank range must satisfy 1 <= low <= high <= dim");
  const std::size_t arity = needs_three_groups(kind) ? 3 : 2;
  if (static_cast<std::size_t>(layout.part_count()) != arity)
    throw std::invalid_argument("sweep layout needs " + std::to_string(arity) +
                                " parts for " + to_string(kind));
  const auto groups = per_part_groups(layout);

  const auto make_state = [&](std::uint64_t seed, int* rank_out) {
    Rng rng(seed);
    const int rank = rng.uniform_int(ranks.low, ranks.high);
    *rank_out = rank;
    return random_mixed_state(layout, rank, derive_seed(seed, 1));
  };
  const auto run_trial = [&](int t) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(t));
    int rank = 0;
    const DensityMatrix rho = make_state(seed, &rank);
    OptimizerConfig trial_cfg = config;
    trial_cfg.seed = derive_seed(seed, 2);
    trial_cfg.policy = ExecPolicy::Serial;  // parallelism lives at trial level
    const InequalityReport rep = evaluate_inequality(kind, rho, groups, trial_cfg, slack, route);
    TrialRecord rec;
    rec.seed = seed;
    rec.rank = rank;
    rec.lhs = rep.lhs;
    rec.rhs = rep.rhs;
    rec.margin = rep.margin;
    rec.verdict = rep.verdict;
    const auto dt = rep.diagnostics.find("deltaTilde");
    if (dt != rep.diagnostics.end()) rec.delta_tilde = dt->second;
    return rec;
  };

  std::vector<std::optional<TrialRecord>> slots(trials);
  std::atomic<bool> stop{false};
  parallel_for(trials, policy, [&](int t) {
    if (stop.load(std::memory_order_relaxed)) return;
    TrialRecord rec = run_trial(t);
    if (rec.verdict == Verdict::ViolatedBeyondSlack) stop.store(true, std::memory_order_relaxed);
    slots[t] = std::move(rec);
  });

  // Make the output independent of scheduling: keep everything up to the
  // first violation (filling any holes opened by the early stop), or all
  // trials when none violated.
  int first_violation = -1;
  for (int t = 0; t < trials; ++t) {
    if (slots[t] && slots[t]->verdict == Verdict::ViolatedBeyondSlack) {
      first_violation = t;
      break;
    }
  }
  int kept = trials;
  if (first_violation >= 0) {
    for (int t = 0; t < first_violation; ++t)
      if (!slots[t]) slots[t] = run_trial(t);
    kept = first_violation + 1;
  }

  SweepSummary summary;
  summary.kind = kind;
  summary.trials = kept;
  summary.aborted_early = first_violation >= 0 && first_violation + 1 < trials;
  std::vector<double> margins, delta_tildes;
  summary.min_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kept; ++t) {
    const TrialRecord& rec = *slots[t];
    summary.records.push_back(rec);
    margins.push_back(rec.margin);
    summary.min_margin = std::min(summary.min_margin, rec.margin);
    if (rec.verdict == Verdict::ViolatedBeyondSlack) {
      ++summary.violations;
      summary.violation_seeds.push_back(rec.seed);
    }
    if (rec.delta_tilde) {
      delta_tildes.push_back(*rec.delta_tilde);
      if (!summary.max_delta_tilde || *rec.delta_tilde > *summary.max_delta_tilde)
        summary.max_delta_tilde = *rec.delta_tilde;
    }
  }
  if (kept == 0) summary.min_margin = 0.0;
  summary.margin_histogram = make_histogram(margins, kHistogramBuckets);
  summary.delta_tilde_histogram = make_histogram(delta_tildes, kHistogramBuckets);

  if (first_violation >= 0 && !dump_dir.empty()) {
    const TrialRecord& rec = *slots[first_violation];
    int rank = 0;
    const DensityMatrix rho = make_state(rec.seed, &rank);
    save_state_file(rho, dump_dir + "/violation-" + std::to_string(rec.seed) + ".json");
  }
  return summary;
}

DeltaTildeSearchResult search_positive_delta_tilde(const SubsystemLayout& layout, int budget,
                                                   std::uint64_t master_seed,
                                                   const OptimizerConfig& config, RankRange ranks,
                                                   const std::string& out_dir,
                                                   ExecPolicy policy) {
  if (budget < 0) throw std::invalid_argument("search budget must be non-negative");
  if (layout.part_count() != 3)
    throw std::invalid_argument("delta-tilde search needs a tripartite layout");
  if (ranks.low < 1 || ranks.high < ranks.low || ranks.high > layout.total_dim())
    throw std::invalid_argument("rank range must satisfy 1 <= low <= high <= dim");
  const auto groups = per_part_groups(layout);
  const double threshold = default_slack(InequalityKind::BoundedSsa);

  std::vector<std::optional<DeltaTildeHit>> slots(budget);
  parallel_for(budget, policy, [&](int t) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(t));
    Rng rng(seed);
    const int rank = rng.uniform_int(ranks.low, ranks.high);
    const DensityMatrix rho = random_mixed_state(layout, rank, derive_seed(seed, 1));
    OptimizerConfig trial_cfg = config;
    trial_cfg.seed = derive_seed(seed, 2);
    trial_cfg.policy = ExecPolicy::Serial;
    const BalanceBreakdown bal =
        balance_delta_tilde(rho, groups[0], groups[1], groups[2], trial_cfg);
    if (bal.value <= threshold) return;
    DeltaTildeHit hit;
    hit.digest = state_digest(rho);
    hit.delta_tilde = bal.value;
    hit.cmi = conditional_mutual_information(rho, groups[0], groups[1], groups[2]);
    hit.state = rho;
    slots[t] = std::move(hit);
  });

  DeltaTildeSearchResult result;
  result.trials = budget;
  for (auto& slot : slots)
    if (slot) result.hits.push_back(std::move(*slot));
  if (!out_dir.empty()) {
    for (std::size_t i = 0; i < result.hits.size(); ++i)
      save_state_file(result.hits[i].state,
                      out_dir + "/dtilde-" + result.hits[i].digest + ".json");
  }
  return result;
}

}  // namespace ssalab
