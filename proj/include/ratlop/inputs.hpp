#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "ratlop/model.hpp"
#include "ratlop/planner.hpp"
#include "ratlop/scoring.hpp"
#include "ratlop/survey.hpp"
#include "ratlop/timeline.hpp"

// Assessor-facing input files and the shared assessment pipeline used by both
// the command line and the HTTP service.

namespace ratlop {

/// Lines of `org_id,level[,model_id]`. Blank lines and lines starting with
/// '#' are ignored.
std::vector<MaturityAssessment> parse_maturity_file(std::string_view text);

/// Four lines of six comma-separated marks, rows Business/Process/Service/Data,
/// columns in barrier-category order. A mark is `0`, `1` or `NA`.
CompatibilityMatrix parse_matrix_file(std::string_view text);

/// Lines of `row,col,status,finding` with 1-based row/col and status `open` or
/// `resolved`. The finding text may itself contain commas.
std::map<std::pair<ConcernLevel, BarrierCategory>, std::vector<Finding>> parse_evidence_file(
    std::string_view text);

/// Attaches evidence to `matrix`, requiring the marks it implies (with the
/// given threshold) to agree with the explicit marks.
void attach_evidence(CompatibilityMatrix& matrix,
                     const std::map<std::pair<ConcernLevel, BarrierCategory>,
                                    std::vector<Finding>>& evidence,
                     int threshold);

/// `w1,w2,w3`.
WeightConfig parse_weights(std::string_view text);

CostModel parse_costs_document(std::string_view text);

/// Raw operational data for one period, before aggregation.
struct IndicatorInputs {
  std::vector<ServerAvailability> servers;
  std::vector<LinkAvailability> links;
  std::vector<SurveyResponse> responses;
  SnapshotConfig config;
};

/// Reads `servers.csv`, `links.csv` and `survey.csv` from `dir`; a missing
/// file leaves that list empty (an override must then be configured).
IndicatorInputs load_indicator_dir(const std::filesystem::path& dir, const PeriodId& period,
                                   SnapshotConfig config);

struct AssessmentInputs {
  PeriodId period;
  std::vector<MaturityAssessment> maturity;
  CompatibilityMatrix matrix;
  // Exactly one of the two is used: a ready snapshot wins over raw data.
  std::optional<PerformanceSnapshot> snapshot;
  std::optional<IndicatorInputs> indicators;
  WeightConfig weights;
};

/// Survey ingestion followed by scoring against `model`.
PeriodAssessment prepare_assessment(const BcnModel& model, const AssessmentInputs& inputs);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ratlop
