#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ratlop/errors.hpp"
#include "ratlop/model.hpp"
#include "ratlop/planner.hpp"
#include "ratlop/scoring.hpp"
#include "ratlop/survey.hpp"
#include "ratlop/timeline.hpp"

namespace ratlop {

inline constexpr std::string_view kBcnFormat = "ratlop-bcn/1";
inline constexpr std::string_view kAssessmentFormat = "ratlop-assessment/1";
inline constexpr std::string_view kScenarioFormat = "ratlop-scenario/1";

using nlohmann::json;

void to_json(json& j, const PeriodId& p);
void from_json(const json& j, PeriodId& p);
void to_json(json& j, const MaturityAssessment& m);
void from_json(const json& j, MaturityAssessment& m);
void to_json(json& j, const CompatibilityMatrix& m);
void from_json(const json& j, CompatibilityMatrix& m);
void to_json(json& j, const PerformanceSnapshot& s);
void from_json(const json& j, PerformanceSnapshot& s);
void to_json(json& j, const SnapshotProvenance& p);
void from_json(const json& j, SnapshotProvenance& p);
void to_json(json& j, const WeightConfig& w);
void from_json(const json& j, WeightConfig& w);
void to_json(json& j, const ScoreBreakdown& s);
void from_json(const json& j, ScoreBreakdown& s);
void to_json(json& j, const Trend& t);
void to_json(json& j, const CostModel& c);
void from_json(const json& j, CostModel& c);
void to_json(json& j, const ImprovementAction& a);
void from_json(const json& j, ImprovementAction& a);
void to_json(json& j, const Violation& v);

json bcn_to_json(const BcnModel& model);
BcnModel bcn_from_json(const json& j);

json assessment_to_json(const std::string& bcn_id, const PeriodAssessment& assessment);
PeriodAssessment assessment_from_json(const json& j);

json scenario_to_json(const Scenario& scenario);

/// Canonical text form of a document: sorted keys, two-space indent,
/// trailing newline. Identical values always produce identical bytes.
std::string dump_document(const json& j);

/// Parses text into JSON, turning syntax errors into Input errors that carry
/// the byte offset.
json parse_document(std::string_view text, std::string_view what);

BcnModel parse_bcn_document(std::string_view text);

/// Runs a conversion, rethrowing JSON type/shape errors as Input errors.
template <typename F>
auto decode(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorCode::Input, "malformed " + std::string(what) + ": " + e.what());
  }
}

}  // namespace ratlop
