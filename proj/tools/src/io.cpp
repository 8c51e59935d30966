#include "epkit_cli/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace epkit::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite");
  return v;
}

json named_matrices_to_json(const std::vector<NamedMatrix>& ms) {
  json out = json::array();
  for (const NamedMatrix& m : ms) out.push_back({{"name", m.name}, {"matrix", matrix_to_json(m.matrix)}});
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    data.push_back(std::move(row));
  }
  return {{"version", "1"}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix file must be a JSON object");
  if (field<std::string>(j, "version") != "1") throw ParseError("unsupported matrix file version");
  const auto rows = field<std::int64_t>(j, "rows");
  const auto cols = field<std::int64_t>(j, "cols");
  if (rows < 1 || cols < 1 || rows > kMaxDimension || cols > kMaxDimension) {
    throw ParseError("rows and cols must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  const json data = field<json>(j, "data");
  if (!data.is_array() || static_cast<std::int64_t>(data.size()) != rows) {
    throw ParseError("data must be an array of 'rows' rows");
  }
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (const json& row : data) {
    if (!row.is_array() || static_cast<std::int64_t>(row.size()) != cols) {
      throw ParseError("every data row must hold 'cols' entries");
    }
    for (const json& e : row) {
      if (!e.is_array() || e.size() != 2) throw ParseError("entries must be [re, im] pairs");
      entries.emplace_back(finite_number(e[0], "real part"), finite_number(e[1], "imaginary part"));
    }
  }
  return ComplexMatrix(rows, cols, entries);
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  return matrix_from_json(j);
}

json tolerance_to_json(const ToleranceConfig& t) { return {{"rank_rtol", t.rank_rtol}, {"eq_atol", t.eq_atol}}; }

ToleranceConfig tolerance_from_json(const json& j) {
  ToleranceConfig t{field<double>(j, "rank_rtol"), field<double>(j, "eq_atol")};
  try {
    t.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return t;
}

json report_to_json(const ClassificationReport& r) {
  return {{"dim", r.dim},
          {"rank", r.rank},
          {"is_ep", r.is_ep},
          {"is_hypo_ep", r.is_hypo_ep},
          {"is_normal", r.is_normal},
          {"gamma", r.gamma},
          {"spectral_radius", r.spectral_radius},
          {"commutator_residual", r.commutator_residual},
          {"range_gap", r.range_gap},
          {"max_principal_angle", r.max_principal_angle},
          {"zero_operator", r.zero_operator},
          {"commutator_agrees", r.commutator_agrees}};
}

ClassificationReport classification_from_json(const json& j) {
  ClassificationReport r;
  r.dim = field<Index>(j, "dim");
  r.rank = field<Index>(j, "rank");
  r.is_ep = field<bool>(j, "is_ep");
  r.is_hypo_ep = field<bool>(j, "is_hypo_ep");
  r.is_normal = field<bool>(j, "is_normal");
  r.gamma = field<double>(j, "gamma");
  r.spectral_radius = field<double>(j, "spectral_radius");
  r.commutator_residual = field<double>(j, "commutator_residual");
  r.range_gap = field<double>(j, "range_gap");
  r.max_principal_angle = field<double>(j, "max_principal_angle");
  r.zero_operator = field<bool>(j, "zero_operator");
  r.commutator_agrees = field<bool>(j, "commutator_agrees");
  return r;
}

json verdict_to_json(const TheoremVerdict& v, bool timing) {
  json j{{"theorem_id", v.theorem_id},
         {"passed", v.passed()},
         {"trials", v.trials},
         {"failures", v.failures},
         {"warnings", v.warnings},
         {"accepting", v.accepting},
         {"rejecting", v.rejecting},
         {"equivalence", v.equivalence},
         {"worst_residual", v.worst_residual},
         {"metrics", v.metrics},
         {"notes", v.notes}};
  j["counterexample"] = nullptr;
  if (v.counterexample) {
    j["counterexample"] = {{"trial", v.counterexample->trial},
                           {"reason", v.counterexample->reason},
                           {"matrices", named_matrices_to_json(v.counterexample->matrices)}};
  }
  j["configuration_error"] = v.configuration_error ? json(*v.configuration_error) : json(nullptr);
  if (timing) j["elapsed_ms"] = v.elapsed_ms;
  return j;
}

TheoremVerdict verdict_from_json(const json& j) {
  TheoremVerdict v;
  v.theorem_id = field<std::string>(j, "theorem_id");
  v.trials = field<std::size_t>(j, "trials");
  v.failures = field<std::size_t>(j, "failures");
  v.warnings = field<std::size_t>(j, "warnings");
  v.accepting = field<std::size_t>(j, "accepting");
  v.rejecting = field<std::size_t>(j, "rejecting");
  v.equivalence = field<bool>(j, "equivalence");
  v.worst_residual = field<double>(j, "worst_residual");
  v.metrics = field<std::map<std::string, double>>(j, "metrics");
  v.notes = field<std::vector<std::string>>(j, "notes");
  if (j.contains("counterexample") && !j.at("counterexample").is_null()) {
    const json& c = j.at("counterexample");
    Counterexample ce;
    ce.trial = field<std::size_t>(c, "trial");
    ce.reason = field<std::string>(c, "reason");
    for (const json& m : field<json>(c, "matrices")) {
      ce.matrices.push_back({field<std::string>(m, "name"), matrix_from_json(field<json>(m, "matrix"))});
    }
    v.counterexample = std::move(ce);
  }
  if (j.contains("configuration_error") && !j.at("configuration_error").is_null()) {
    v.configuration_error = field<std::string>(j, "configuration_error");
  }
  if (j.contains("elapsed_ms")) v.elapsed_ms = field<std::int64_t>(j, "elapsed_ms");
  return v;
}

json suite_to_json(const SuiteResult& s, bool timing) {
  json verdicts = json::array();
  for (const TheoremVerdict& v : s.verdicts) verdicts.push_back(verdict_to_json(v, timing));
  return {{"passed", s.passed()}, {"verdicts", std::move(verdicts)}};
}

SuiteResult suite_from_json(const json& j) {
  SuiteResult s;
  for (const json& v : field<json>(j, "verdicts")) s.verdicts.push_back(verdict_from_json(v));
  return s;
}

json limit_study_to_json(const LimitStudy& s) {
  json rows = json::array();
  for (const LimitStudyRow& r : s.rows) {
    rows.push_back({{"n", r.n},
                    {"gamma", r.gamma},
                    {"spectral_radius", r.spectral_radius},
                    {"is_ep", r.is_ep},
                    {"pinv_norm", r.pinv_norm}});
  }
  return {{"family", std::string(to_string(s.family))},
          {"n_max", s.n_max},
          {"ambient_dim", s.ambient_dim},
          {"rows", std::move(rows)}};
}

LimitStudy limit_study_from_json(const json& j) {
  LimitStudy s;
  try {
    s.family = parse_model_family(field<std::string>(j, "family"));
  } catch (const UnknownFamily& e) {
    throw ParseError(e.what());
  }
  s.n_max = field<Index>(j, "n_max");
  s.ambient_dim = field<Index>(j, "ambient_dim");
  for (const json& r : field<json>(j, "rows")) {
    s.rows.push_back({field<Index>(r, "n"), field<double>(r, "gamma"), field<double>(r, "spectral_radius"),
                      field<bool>(r, "is_ep"), field<double>(r, "pinv_norm")});
  }
  return s;
}

std::string payload_kind(const Payload& p) {
  struct {
    std::string operator()(const ClassificationReport&) const { return "classification"; }
    std::string operator()(const TheoremVerdict&) const { return "verdict"; }
    std::string operator()(const SuiteResult&) const { return "suite"; }
    std::string operator()(const LimitStudy&) const { return "limit_study"; }
  } visitor;
  return std::visit(visitor, p);
}

json report_file_to_json(const ReportFile& r) {
  const bool timing = r.wall_time_ms.has_value();
  json payload = std::visit(
      [timing](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClassificationReport>) return report_to_json(p);
        if constexpr (std::is_same_v<T, TheoremVerdict>) return verdict_to_json(p, timing);
        if constexpr (std::is_same_v<T, SuiteResult>) return suite_to_json(p, timing);
        if constexpr (std::is_same_v<T, LimitStudy>) return limit_study_to_json(p);
      },
      r.payload);
  json j{{"tool_version", r.tool_version},
         {"tolerance", tolerance_to_json(r.tolerance)},
         {"kind", payload_kind(r.payload)},
         {"payload", std::move(payload)}};
  if (r.wall_time_ms) j["wall_time_ms"] = *r.wall_time_ms;
  return j;
}

ReportFile report_file_from_json(const json& j) {
  ReportFile r{field<std::string>(j, "tool_version"), tolerance_from_json(field<json>(j, "tolerance")),
               ClassificationReport{}, std::nullopt};
  const std::string kind = field<std::string>(j, "kind");
  const json payload = field<json>(j, "payload");
  if (kind == "classification") {
    r.payload = classification_from_json(payload);
  } else if (kind == "verdict") {
    r.payload = verdict_from_json(payload);
  } else if (kind == "suite") {
    r.payload = suite_from_json(payload);
  } else if (kind == "limit_study") {
    r.payload = limit_study_from_json(payload);
  } else {
    throw ParseError("unknown report kind '" + kind + "'");
  }
  if (j.contains("wall_time_ms")) r.wall_time_ms = field<std::int64_t>(j, "wall_time_ms");
  return r;
}

}  // namespace epkit::io
