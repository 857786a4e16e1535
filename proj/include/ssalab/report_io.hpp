#pragma once

// Report serialization: JSON documents (camelCase keys, ordered fields) and
// flat CSV for sweeps.  All numeric values are rounded to 12 significant
// digits so that serialized reports compare field-for-field across runs and
// platforms.  The only non-deterministic field is meta.generatedAt, which is
// explicitly excluded from the determinism contract.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "ssalab/channels.hpp"
#include "ssalab/inequalities.hpp"
#include "ssalab/recovery.hpp"

namespace ssalab {

using Json = nlohmann::ordered_json;

// Rounds to 12 significant digits (and normalizes -0 to 0).
double round_sig(double x);
// The same rounding as a string, for CLI output and CSV cells.
std::string format_sig(double x);

Json report_to_json(const InequalityReport& rep);
Json summary_to_json(const SweepSummary& summary);
Json search_to_json(const DeltaTildeSearchResult& result);
Json measure_to_json(const MeasureResult& result);
Json markov_to_json(const MarkovCheck& check);
Json saturation_to_json(const BssaSaturationReport& rep);
Json dataproc_to_json(const DataProcessingReport& rep);

// Wraps a report with a meta block: {seed, generatedAt, generatedAtNote}.
// generatedAt is a timestamp excluded from the determinism contract, as its
// note says; everything else in the document is reproducible from the seed.
Json with_meta(Json doc, std::uint64_t seed);
// Removes the fields excluded from the determinism contract, for comparisons.
Json strip_volatile_meta(Json doc);

// One row per trial plus a header row.
std::string summary_to_csv(const SweepSummary& summary);
// Single data row; diagnostics become extra columns in key order.
std::string report_to_csv(const InequalityReport& rep);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ssalab
