#pragma once

#include <string>

#include <json.hpp>

#include "qg3/campaign.hpp"

namespace qg3 {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "qg3-v1";

// Label: {"n": 2, "sites": [1,2], "gm": [4,6]}
Json label_to_json(const BasisLabel& l);
BasisLabel label_from_json(const Json& j, const std::string& where);

// Coefficient vector: {"n": 2, "terms": [{"sites":[1],"gm":[3],"h":0.5}, ...]}
Json coeffs_to_json(const CoefficientVector& c);
CoefficientVector coeffs_from_json(const Json& j, const std::string& where);

// Dense operator: {"dim": 9, "re": [[...]], "im": [[...]]} (row-major)
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);

// Schedule: {"n":3, "segments":[{"dt":0.1, "terms":[...]}, ...]}
Json schedule_to_json(const Schedule& s);
/// Validates against the schema; errors carry a JSON pointer to the
/// offending field.
Schedule schedule_from_json(const Json& j);
Schedule load_schedule(const std::string& path);

/// Gate generators are the trace-normalized basis elements by default; the
/// operator-norm convention rescales angles so each generator has unit
/// operator norm (lambda_8 factors carry 2/sqrt(3), s-body elements
/// (3/2)^((s-1)/2)).
enum class GateConvention { kTraceNormalized, kOperatorNorm };
Json gates_to_json(const GateSequence& g, GateConvention conv = GateConvention::kTraceNormalized);
GateSequence gates_from_json(const Json& j);

Json report_to_json(const SynthesisReport& r, const Json& config);
Json campaign_to_json(const CampaignReport& r, const Json& config);

/// Per-slice diagnostics CSV: slice index, c, width, mean bound, measured
/// factoring defect, gates.
std::string slices_to_csv(const SynthesisReport& r, const Json& config);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace qg3
