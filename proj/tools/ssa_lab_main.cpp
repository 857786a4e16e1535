// ssa-lab: command-line front end for the entropy-inequality laboratory.
//
// Subcommands mirror the library modules: measure (single quantities),
// check (one inequality on one state, or a seeded random sweep), sweep,
// search-dtilde, dataproc (two-stage channel pipeline), saturate
// (b-SSA saturating states), and state gen.
//
// Exit codes: 0 success/satisfied, 2 any verdict violatedBeyondSlack,
// 1 usage or input errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssalab/channels.hpp"
#include "ssalab/inequalities.hpp"
#include "ssalab/recovery.hpp"
#include "ssalab/report_io.hpp"

namespace {

using namespace ssalab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

// Common per-command options, bound to CLI11 flags where registered.
struct CommonOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string format = "json";
  int restarts = OptimizerConfig{}.restarts;
  double tol = OptimizerConfig{}.tolerance;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  auto* seed_opt = cmd->add_option("--seed", opts->seed, "Master seed (default: $SSA_LAB_SEED or 0)");
  cmd->parse_complete_callback([opts, seed_opt] { opts->seed_given = seed_opt->count() > 0; });
  cmd->add_option("--out", opts->out, "Write the report to this path");
  cmd->add_option("--format", opts->format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--restarts", opts->restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opts->tol, "Optimizer convergence tolerance");
  cmd->add_flag("--serial", opts->serial, "Disable internal parallelism");
}

std::uint64_t resolve_seed(const CommonOpts& opts) {
  if (opts.seed_given) return opts.seed;
  if (const char* env = std::getenv("SSA_LAB_SEED")) {
    std::size_t used = 0;
    const std::string text(env);
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("SSA_LAB_SEED is not an integer");
    return value;
  }
  return 0;
}

OptimizerConfig make_config(const CommonOpts& opts, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.restarts = opts.restarts;
  cfg.tolerance = opts.tol;
  cfg.seed = seed;
  cfg.policy = opts.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
  return cfg;
}

ExecPolicy sweep_policy(const CommonOpts& opts) {
  return opts.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

// A state argument is a file path if such a file exists, else a family name.
DensityMatrix resolve_state(const std::string& spec) {
  if (std::filesystem::exists(spec)) return load_state_file(spec);
  return make_named_state(spec);
}

SubsystemLayout layout_from_dims(const std::string& dims) {
  std::vector<Part> parts;
  std::size_t start = 0;
  while (start <= dims.size()) {
    const std::size_t comma = dims.find(',', start);
    const std::string piece = dims.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t used = 0;
    const int dim = std::stoi(piece, &used);
    if (used != piece.size() || dim < 2) throw std::invalid_argument("bad dimension: " + piece);
    if (parts.size() >= 26) throw std::invalid_argument("too many parts");
    parts.push_back({std::string(1, static_cast<char>('A' + parts.size())), dim});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.empty()) throw std::invalid_argument("empty --dims");
  return SubsystemLayout(parts);
}

RankRange parse_rank(const std::string& text) {
  const std::size_t dots = text.find("..");
  RankRange range;
  if (dots == std::string::npos) {
    range.low = range.high = std::stoi(text);
  } else {
    range.low = std::stoi(text.substr(0, dots));
    range.high = std::stoi(text.substr(dots + 2));
  }
  return range;
}

// "A|B,C" -> {{A},{B,C}}; empty -> one group per layout part.
std::vector<std::vector<std::string>> parse_groups(const std::string& text,
                                                   const SubsystemLayout& layout) {
  std::vector<std::vector<std::string>> groups;
  if (text.empty()) {
    for (const Part& p : layout.parts()) groups.push_back({p.label});
    return groups;
  }
  std::vector<std::string> group;
  std::string label;
  const auto flush_label = [&] {
    if (label.empty()) throw std::invalid_argument("empty label in --groups");
    group.push_back(label);
    label.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush_label();
    } else if (c == '|') {
      flush_label();
      groups.push_back(group);
      group.clear();
    } else {
      label += c;
    }
  }
  flush_label();
  groups.push_back(group);
  return groups;
}

// Flattens scalar fields (and one level of nested objects) to a two-line CSV.
std::string json_to_flat_csv(const Json& doc) {
  std::vector<std::pair<std::string, std::string>> cells;
  const auto add_scalar = [&](const std::string& name, const Json& value) {
    if (value.is_string())
      cells.emplace_back(name, value.get<std::string>());
    else
      cells.emplace_back(name, value.dump());
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "meta") continue;
    if (value.is_object()) {
      for (const auto& [inner_key, inner] : value.items())
        if (!inner.is_structured()) add_scalar(key + "." + inner_key, inner);
    } else if (!value.is_array()) {
      add_scalar(key, value);
    }
  }
  std::string head, row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      head += ',';
      row += ',';
    }
    head += cells[i].first;
    row += cells[i].second;
  }
  return head + "\n" + row + "\n";
}

void emit_report(const Json& doc, const std::string& fallback_csv, const CommonOpts& opts) {
  if (opts.out.empty()) return;
  if (opts.format == "csv")
    write_text_file(opts.out, fallback_csv.empty() ? json_to_flat_csv(doc) : fallback_csv);
  else
    write_text_file(opts.out, doc.dump(2) + "\n");
}

int run_measure(const std::string& what, const std::string& state_spec,
                const std::string& measured_csv, const std::string& groups_text,
                const CommonOpts& opts) {
  const DensityMatrix rho = resolve_state(state_spec);
  const std::uint64_t seed = resolve_seed(opts);
  const OptimizerConfig cfg = make_config(opts, seed);
  const auto groups = parse_groups(groups_text, rho.layout);
  const auto need_groups = [&](std::size_t n) {
    if (groups.size() != n)
      throw std::invalid_argument(what + " needs " + std::to_string(n) + " subsystem groups");
  };
  std::vector<std::string> measured;
  if (!measured_csv.empty())
    for (const auto& g : parse_groups(measured_csv, rho.layout))
      measured.insert(measured.end(), g.begin(), g.end());

  Json doc;
  double value = 0.0;
  if (what == "entropy") {
    value = measured.empty() ? von_neumann_entropy(rho) : subsystem_entropy(rho, measured);
    doc = {{"measure", what}, {"value", round_sig(value)}};
  } else if (what == "discord" || what == "classical") {
    if (measured.empty()) throw std::invalid_argument(what + " needs --measured");
    const MeasureResult result = what == "discord" ? quantum_discord(rho, measured, cfg)
                                                   : classical_correlation(rho, measured, cfg);
    value = result.value;
    doc = Json{{"measure", what}};
    doc.update(measure_to_json(result), true);
  } else if (what == "mi") {
    need_groups(2);
    value = mutual_information(rho, groups[0], groups[1]);
    doc = {{"measure", what}, {"value", round_sig(value)}};
  } else if (what == "cmi") {
    need_groups(3);
    value = conditional_mutual_information(rho, groups[0], groups[1], groups[2]);
    doc = {{"measure", what}, {"value", round_sig(value)}};
  } else if (what == "coherent") {
    need_groups(2);
    value = coherent_information(rho, groups[0], groups[1]);
    doc = {{"measure", what}, {"value", round_sig(value)}};
  } else if (what == "eof") {
    need_groups(2);
    value = eof_auto(rho, groups[0], groups[1], cfg);
    doc = {{"measure", what}, {"value", round_sig(value)}};
  } else if (what == "eof-ensemble") {
    need_groups(2);
    const MeasureResult result = eof_ensemble_min(rho, groups[0], groups[1], cfg);
    value = result.value;
    doc = Json{{"measure", what}};
    doc.update(measure_to_json(result), true);
  } else if (what == "delta" || what == "dtilde") {
    need_groups(3);
    BalanceBreakdown bal;
    if (what == "delta") {
      for (const auto& g : groups)
        if (g.size() != 1) throw std::invalid_argument("delta needs single-label groups");
      bal = balance_delta(rho, groups[0][0], groups[1][0], groups[2][0], cfg);
    } else {
      bal = balance_delta_tilde(rho, groups[0], groups[1], groups[2], cfg);
    }
    value = bal.value;
    doc = {{"measure", what}, {"value", round_sig(value)}};
    Json terms = Json::object();
    for (const auto& [key, term] : bal.terms) terms[key] = round_sig(term);
    doc["terms"] = std::move(terms);
  } else {
    throw std::invalid_argument("unknown measure: " + what);
  }

  std::cout << what << ": " << format_sig(value) << "\n";
  emit_report(with_meta(doc, seed), "", opts);
  return kExitOk;
}

int run_check(const std::string& kind_name, const std::string& state_spec, bool sweep_mode,
              int random_trials, const std::string& dims, const std::string& rank_text,
              const std::string& groups_text, const std::string& dump_dir, double slack,
              const CommonOpts& opts) {
  const InequalityKind kind = inequality_kind_from_string(kind_name);
  const std::uint64_t seed = resolve_seed(opts);
  const OptimizerConfig cfg = make_config(opts, seed);

  if (sweep_mode) {
    const SubsystemLayout layout = layout_from_dims(dims);
    const SweepSummary summary =
        sweep_random(kind, random_trials, layout, parse_rank(rank_text), seed, cfg, dump_dir,
                     sweep_policy(opts), slack);
    std::cout << kind_name << " sweep: trials=" << summary.trials
              << " violations=" << summary.violations
              << " minMargin=" << format_sig(summary.min_margin) << "\n";
    emit_report(with_meta(summary_to_json(summary), seed), summary_to_csv(summary), opts);
    return summary.violations > 0 ? kExitViolation : kExitOk;
  }

  if (state_spec.empty()) throw std::invalid_argument("check needs --state or --random N");
  const DensityMatrix rho = resolve_state(state_spec);
  const InequalityReport rep =
      evaluate_inequality(kind, rho, parse_groups(groups_text, rho.layout), cfg, slack);
  std::cout << kind_name << ": margin=" << format_sig(rep.margin)
            << " verdict=" << to_string(rep.verdict) << "\n";
  emit_report(with_meta(report_to_json(rep), seed), report_to_csv(rep), opts);
  return rep.verdict == Verdict::ViolatedBeyondSlack ? kExitViolation : kExitOk;
}

int run_search(int budget, const std::string& dims, const std::string& rank_text,
               const std::string& state_dir, const CommonOpts& opts) {
  const std::uint64_t seed = resolve_seed(opts);
  const SubsystemLayout layout = layout_from_dims(dims);
  const DeltaTildeSearchResult result =
      search_positive_delta_tilde(layout, budget, seed, make_config(opts, seed),
                                  parse_rank(rank_text), state_dir, sweep_policy(opts));
  std::cout << "search-dtilde: trials=" << result.trials << " hits=" << result.hits.size()
            << "\n";
  emit_report(with_meta(search_to_json(result), seed), "", opts);
  return kExitOk;
}

int run_dataproc(const std::string& input_spec, const std::string& ch1, const std::string& ch2,
                 bool direct, const CommonOpts& opts) {
  const DensityMatrix initial = resolve_state(input_spec);
  const std::uint64_t seed = resolve_seed(opts);
  const StagePipeline pipe =
      run_two_stage(initial, make_named_channel(ch1), make_named_channel(ch2));
  const DataProcessingReport rep = data_processing_report(pipe, make_config(opts, seed), direct);
  std::cout << "dataproc: identityResidual=" << format_sig(rep.identity_residual)
            << " crossResidual=" << format_sig(rep.cross_residual)
            << " qdpMargin=" << format_sig(rep.qdp_margin)
            << " qdp2Margin=" << format_sig(rep.qdp2_margin) << "\n";
  emit_report(with_meta(dataproc_to_json(rep), seed), "", opts);
  return kExitOk;
}

int run_saturate(const std::string& state_spec, const CommonOpts& opts) {
  const std::uint64_t seed = resolve_seed(opts);
  DensityMatrix rho = state_spec.empty()
                          ? make_bssa_saturating_state(random_bssa_spec(seed))
                          : resolve_state(state_spec);
  if (rho.layout.part_count() != 3)
    throw std::invalid_argument("saturate needs a tripartite (A,B,C) state");
  const std::string a = rho.layout.label(0), b = rho.layout.label(1), c = rho.layout.label(2);
  const BssaSaturationReport rep =
      check_bssa_saturation(rho, {a}, {b}, {c}, make_config(opts, seed));
  std::cout << "saturate: jEquality=" << format_sig(rep.j_equality)
            << " eofMonogamy=" << format_sig(rep.eof_monogamy)
            << " maxBoundSaturated=" << (rep.max_bound_saturated ? "true" : "false")
            << " cmi=" << format_sig(rep.cmi) << "\n";
  emit_report(with_meta(saturation_to_json(rep), seed), "", opts);
  return kExitOk;
}

int run_state_gen(const std::string& family, const std::string& state_spec,
                  const std::string& dims, const std::string& rank_text, const CommonOpts& opts) {
  if (opts.out.empty()) throw std::invalid_argument("state gen needs --out");
  const std::uint64_t seed = resolve_seed(opts);
  DensityMatrix rho;
  if (family == "markov") {
    rho = make_markov_state(random_markov_spec(seed));
  } else if (family == "bssa") {
    rho = make_bssa_saturating_state(random_bssa_spec(seed));
  } else if (!family.empty()) {
    throw std::invalid_argument("unknown --family: " + family);
  } else if (!state_spec.empty()) {
    rho = resolve_state(state_spec);
  } else {
    const RankRange range = parse_rank(rank_text);
    if (range.low != range.high) throw std::invalid_argument("state gen needs a single --rank");
    rho = random_mixed_state(layout_from_dims(dims), range.low, seed);
  }
  save_state_file(rho, opts.out);
  std::cout << "state: digest=" << state_digest(rho) << " dim=" << rho.layout.total_dim()
            << " -> " << opts.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-inequality laboratory for multipartite quantum states"};
  app.require_subcommand(1);

  CommonOpts measure_opts;
  std::string measure_what, measure_state, measure_measured, measure_groups;
  CLI::App* measure = app.add_subcommand("measure", "Compute one information measure");
  measure->add_option("what", measure_what,
                      "entropy|mi|cmi|coherent|discord|classical|eof|eof-ensemble|delta|dtilde")
      ->required();
  measure->add_option("--state", measure_state, "Named state or state file")->required();
  measure->add_option("--measured", measure_measured, "Measured subsystem label(s)");
  measure->add_option("--groups", measure_groups, "Partition, e.g. A|B,C (default: per part)");
  add_common(measure, &measure_opts);

  CommonOpts check_opts;
  std::string check_kind, check_state, check_dims = "2,2,2", check_rank = "1..4";
  std::string check_groups, check_dump;
  int check_random = 0;
  CLI::App* check = app.add_subcommand("check", "Evaluate an inequality (single state or sweep)");
  check->add_option("kind", check_kind,
                    "wsa|ssa|bssa|maxBound|koashiWinter|boundedWeakMonotonicity|conservation")
      ->required();
  check->add_option("--state", check_state, "Named state or state file");
  check->add_option("--random", check_random, "Sweep this many random states instead");
  check->add_option("--dims", check_dims, "Sweep layout dims, e.g. 2,2,2");
  check->add_option("--rank", check_rank, "Sweep rank r or min..max");
  check->add_option("--groups", check_groups, "Partition for --state mode");
  check->add_option("--dump-dir", check_dump, "Directory for violating-state dumps");
  double check_slack = -1.0;
  check->add_option("--slack", check_slack, "Override the kind's default slack");
  add_common(check, &check_opts);

  CommonOpts sweep_opts;
  std::string sweep_kind, sweep_dims = "2,2,2", sweep_rank = "1..4", sweep_dump;
  double sweep_slack = -1.0;
  int sweep_trials = 100;
  CLI::App* sweep = app.add_subcommand("sweep", "Random-state sweep of one inequality");
  sweep->add_option("kind", sweep_kind, "Inequality kind")->required();
  sweep->add_option("--trials", sweep_trials, "Number of random states")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--dims", sweep_dims, "Layout dims, e.g. 2,2,2");
  sweep->add_option("--rank", sweep_rank, "Rank r or min..max");
  sweep->add_option("--dump-dir", sweep_dump, "Directory for violating-state dumps");
  sweep->add_option("--slack", sweep_slack, "Override the kind's default slack");
  add_common(sweep, &sweep_opts);

  CommonOpts search_opts;
  std::string search_dims = "2,2,2", search_rank = "1..4", search_dir;
  int search_budget = 100;
  CLI::App* search = app.add_subcommand("search-dtilde",
                                        "Hunt for states with positive correlation balance");
  search->add_option("--trials", search_budget, "Search budget");
  search->add_option("--dims", search_dims, "Layout dims");
  search->add_option("--rank", search_rank, "Rank r or min..max");
  search->add_option("--state-dir", search_dir, "Directory to persist hit states");
  add_common(search, &search_opts);

  CommonOpts dp_opts;
  std::string dp_input, dp_ch1, dp_ch2;
  bool dp_direct = false;
  CLI::App* dataproc = app.add_subcommand("dataproc", "Two-stage channel pipeline analysis");
  dataproc->add_option("--input,--state", dp_input, "Initial AB state (named or file)")
      ->required();
  dataproc->add_option("--ch1", dp_ch1, "Stage-1 channel, e.g. amp:0.3")->required();
  dataproc->add_option("--ch2", dp_ch2, "Stage-2 channel, e.g. phase:0.5")->required();
  dataproc->add_flag("--direct", dp_direct,
                     "Optimize environment-side terms directly instead of the purity chain");
  add_common(dataproc, &dp_opts);

  CommonOpts sat_opts;
  std::string sat_state;
  CLI::App* saturate = app.add_subcommand("saturate", "Audit a b-SSA saturating state");
  saturate->add_option("--state", sat_state, "State file (default: construct from --seed)");
  add_common(saturate, &sat_opts);

  CLI::App* state = app.add_subcommand("state", "State utilities");
  state->require_subcommand(1);
  CommonOpts gen_opts;
  std::string gen_family, gen_state, gen_dims = "2,2,2", gen_rank = "2";
  CLI::App* gen = state->add_subcommand("gen", "Generate a state file");
  gen->add_option("--family", gen_family, "markov|bssa (seeded constructions)");
  gen->add_option("--state", gen_state, "Named state to materialize");
  gen->add_option("--dims", gen_dims, "Random-state layout dims");
  gen->add_option("--rank", gen_rank, "Random-state rank");
  add_common(gen, &gen_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (measure->parsed())
      return run_measure(measure_what, measure_state, measure_measured, measure_groups,
                         measure_opts);
    if (check->parsed())
      return run_check(check_kind, check_state, check->count("--random") > 0, check_random,
                       check_dims, check_rank, check_groups, check_dump, check_slack,
                       check_opts);
    if (sweep->parsed())
      return run_check(sweep_kind, "", true, sweep_trials, sweep_dims, sweep_rank, "",
                       sweep_dump, sweep_slack, sweep_opts);
    if (search->parsed())
      return run_search(search_budget, search_dims, search_rank, search_dir, search_opts);
    if (dataproc->parsed()) return run_dataproc(dp_input, dp_ch1, dp_ch2, dp_direct, dp_opts);
    if (saturate->parsed()) return run_saturate(sat_state, sat_opts);
    if (state->parsed() && gen->parsed())
      return run_state_gen(gen_family, gen_state, gen_dims, gen_rank, gen_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cerr << "error: no command\n";
  return kExitUsage;
}
