#pragma once

// JSON encodings of matrices and reports.
//
// MatrixFile: {"version": "1", "rows": r, "cols": c, "data": [[[re, im], ...], ...]}
// ReportFile: {"tool_version", "tolerance", "kind", "payload", ["wall_time_ms"]}

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "epkit/classify.hpp"
#include "epkit/harness.hpp"
#include "epkit/models.hpp"

namespace epkit::io {

using nlohmann::json;

/// Malformed or schema-violating input.
class ParseError : public Error {
 public:
  using Error::Error;
};

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);
/// Reads and validates a MatrixFile. Throws ParseError.
ComplexMatrix read_matrix_file(const std::string& path);

json tolerance_to_json(const ToleranceConfig& t);
ToleranceConfig tolerance_from_json(const json& j);

json report_to_json(const ClassificationReport& r);
ClassificationReport classification_from_json(const json& j);

/// elapsed_ms is emitted only when `timing` is set.
json verdict_to_json(const TheoremVerdict& v, bool timing);
TheoremVerdict verdict_from_json(const json& j);

json suite_to_json(const SuiteResult& s, bool timing);
SuiteResult suite_from_json(const json& j);

json limit_study_to_json(const LimitStudy& s);
LimitStudy limit_study_from_json(const json& j);

using Payload = std::variant<ClassificationReport, TheoremVerdict, SuiteResult, LimitStudy>;

struct ReportFile {
  std::string tool_version;
  ToleranceConfig tolerance;
  Payload payload;
  std::optional<std::int64_t> wall_time_ms;
};

/// "classification", "verdict", "suite" or "limit_study".
std::string payload_kind(const Payload& p);

json report_file_to_json(const ReportFile& r);
/// Throws ParseError.
ReportFile report_file_from_json(const json& j);

}  // namespace epkit::io
