#include "ssalab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssalab {

double round_sig(double x) {
  if (!std::isfinite(x)) return x;
  if (x == 0.0) return 0.0;  // fold -0 into 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format_sig(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

Json terms_to_json(const std::map<std::string, double>& terms) {
  Json out = Json::object();
  for (const auto& [key, value] : terms) out[key] = round_sig(value);
  return out;
}

Json histogram_to_json(const std::vector<HistogramBucket>& histogram) {
  Json out = Json::array();
  for (const HistogramBucket& bucket : histogram)
    out.push_back({{"bucketLow", round_sig(bucket.low)},
                   {"bucketHigh", round_sig(bucket.high)},
                   {"count", bucket.count}});
  return out;
}

}  // namespace

Json report_to_json(const InequalityReport& rep) {
  return {{"kind", to_string(rep.kind)},
          {"lhs", round_sig(rep.lhs)},
          {"rhs", round_sig(rep.rhs)},
          {"margin", round_sig(rep.margin)},
          {"slack", round_sig(rep.slack)},
          {"verdict", to_string(rep.verdict)},
          {"inputDigest", rep.input_digest},
          {"diagnostics", terms_to_json(rep.diagnostics)}};
}

Json summary_to_json(const SweepSummary& summary) {
  Json records = Json::array();
  for (std::size_t t = 0; t < summary.records.size(); ++t) {
    const TrialRecord& rec = summary.records[t];
    Json row = {{"trial", t},
                {"seed", rec.seed},
                {"rank", rec.rank},
                {"lhs", round_sig(rec.lhs)},
                {"rhs", round_sig(rec.rhs)},
                {"margin", round_sig(rec.margin)},
                {"verdict", to_string(rec.verdict)}};
    if (rec.delta_tilde) row["deltaTilde"] = round_sig(*rec.delta_tilde);
    records.push_back(std::move(row));
  }
  Json doc = {{"kind", to_string(summary.kind)},
              {"trials", summary.trials},
              {"violations", summary.violations},
              {"minMargin", round_sig(summary.min_margin)},
              {"seeds", summary.violation_seeds},
              {"abortedEarly", summary.aborted_early},
              {"histogram", histogram_to_json(summary.margin_histogram)}};
  if (summary.max_delta_tilde) {
    doc["maxDeltaTilde"] = round_sig(*summary.max_delta_tilde);
    doc["deltaTildeHistogram"] = histogram_to_json(summary.delta_tilde_histogram);
  }
  doc["records"] = std::move(records);
  return doc;
}

Json search_to_json(const DeltaTildeSearchResult& result) {
  Json hits = Json::array();
  for (const DeltaTildeHit& hit : result.hits)
    hits.push_back({{"digest", hit.digest},
                    {"deltaTilde", round_sig(hit.delta_tilde)},
                    {"cmi", round_sig(hit.cmi)}});
  return {{"trials", result.trials}, {"hitCount", hits.size()}, {"hits", std::move(hits)}};
}

Json measure_to_json(const MeasureResult& result) {
  Json doc = {{"value", round_sig(result.value)},
              {"converged", result.converged},
              {"spreadOverRestarts", round_sig(result.spread_over_restarts)}};
  if (result.measurement) {
    Json params = Json::array();
    for (Eigen::Index i = 0; i < result.measurement->parameters.size(); ++i)
      params.push_back(round_sig(result.measurement->parameters[i]));
    doc["measurement"] = {{"target", result.measurement->target}, {"parameters", params}};
  }
  if (result.ensemble) {
    Json probs = Json::array();
    for (double p : result.ensemble->probs) probs.push_back(round_sig(p));
    doc["ensembleProbabilities"] = std::move(probs);
  }
  return doc;
}

Json markov_to_json(const MarkovCheck& check) {
  return {{"cmi", round_sig(check.cmi)},
          {"recoveryDistance", round_sig(check.recovery_distance)},
          {"isMarkov", check.is_markov}};
}

Json saturation_to_json(const BssaSaturationReport& rep) {
  return {{"jEquality", round_sig(rep.j_equality)},
          {"eofMonogamy", round_sig(rep.eof_monogamy)},
          {"maxBoundSaturated", rep.max_bound_saturated},
          {"cmi", round_sig(rep.cmi)},
          {"deltaTilde", round_sig(rep.delta_tilde)},
          {"terms", terms_to_json(rep.terms)}};
}

Json dataproc_to_json(const DataProcessingReport& rep) {
  return {{"icStage1", round_sig(rep.ic_stage1)},
          {"icStage2", round_sig(rep.ic_stage2)},
          {"cmi", round_sig(rep.cmi)},
          {"identityResidual", round_sig(rep.identity_residual)},
          {"deltaViaB", round_sig(rep.delta_via_b)},
          {"deltaViaE", round_sig(rep.delta_via_e)},
          {"crossResidual", round_sig(rep.cross_residual)},
          {"liiStage1", round_sig(rep.lii_stage1)},
          {"liiFull", round_sig(rep.lii_full)},
          {"liiBoundMargin", round_sig(rep.lii_bound_margin)},
          {"qdpMargin", round_sig(rep.qdp_margin)},
          {"qdp2Margin", round_sig(rep.qdp2_margin)},
          {"method", rep.method},
          {"terms", terms_to_json(rep.terms)}};
}

Json with_meta(Json doc, std::uint64_t seed) {
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  doc["meta"] = {{"seed", seed},
                 {"generatedAt", stamp},
                 {"generatedAtNote", "timestamp; excluded from the determinism contract"}};
  return doc;
}

Json strip_volatile_meta(Json doc) {
  if (doc.contains("meta") && doc["meta"].is_object()) doc["meta"].erase("generatedAt");
  return doc;
}

std::string summary_to_csv(const SweepSummary& summary) {
  const bool has_dt = summary.max_delta_tilde.has_value();
  std::ostringstream out;
  out << "trial,seed,rank,lhs,rhs,margin,verdict";
  if (has_dt) out << ",deltaTilde";
  out << "\n";
  for (std::size_t t = 0; t < summary.records.size(); ++t) {
    const TrialRecord& rec = summary.records[t];
    out << t << ',' << rec.seed << ',' << rec.rank << ',' << format_sig(rec.lhs) << ','
        << format_sig(rec.rhs) << ',' << format_sig(rec.margin) << ',' << to_string(rec.verdict);
    if (has_dt) out << ',' << (rec.delta_tilde ? format_sig(*rec.delta_tilde) : "");
    out << "\n";
  }
  return out.str();
}

std::string report_to_csv(const InequalityReport& rep) {
  std::ostringstream head, row;
  head << "kind,lhs,rhs,margin,slack,verdict,inputDigest";
  row << to_string(rep.kind) << ',' << format_sig(rep.lhs) << ',' << format_sig(rep.rhs) << ','
      << format_sig(rep.margin) << ',' << format_sig(rep.slack) << ',' << to_string(rep.verdict)
      << ',' << rep.input_digest;
  for (const auto& [key, value] : rep.diagnostics) {  // std::map: keys already sorted
    head << ',' << key;
    row << ',' << format_sig(value);
  }
  return head.str() + "\n" + row.str() + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ssalab
