#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratlop/model.hpp"

namespace ratlop {

/// Tolerance for every internal score comparison.
inline constexpr double kScoreEpsilon = 1e-9;

struct MaturityAssessment {
  std::string org_id;
  int imml = 1;
  std::optional<std::string> model_id;

  bool operator==(const MaturityAssessment&) const = default;
};

struct Finding {
  std::string text;
  bool resolved = false;

  bool operator==(const Finding&) const = default;
};

struct MatrixCell {
  bool marked = false;
  bool not_applicable = false;
  std::vector<Finding> evidence;

  bool operator==(const MatrixCell&) const = default;
};

/// Binary incompatibility marks over concern levels x barrier categories.
/// A not-applicable cell never counts as marked.
class CompatibilityMatrix {
public:
  CompatibilityMatrix() = default;

  static CompatibilityMatrix from_marks(
      const std::array<std::array<int, kBarrierCategoryCount>, kConcernLevelCount>& marks);

  /// Derives every mark from the evidence: a cell is marked iff it holds at
  /// least `threshold` unresolved findings.
  static CompatibilityMatrix from_evidence(
      const std::map<std::pair<ConcernLevel, BarrierCategory>, std::vector<Finding>>& evidence,
      int threshold = 1);

  const MatrixCell& cell(ConcernLevel level, BarrierCategory barrier) const;
  MatrixCell& cell(ConcernLevel level, BarrierCategory barrier);

  bool marked(ConcernLevel level, BarrierCategory barrier) const {
    return cell(level, barrier).marked;
  }
  void set_marked(ConcernLevel level, BarrierCategory barrier, bool value);
  void set_not_applicable(ConcernLevel level, BarrierCategory barrier);

  int marked_count() const;

  bool operator==(const CompatibilityMatrix&) const = default;

private:
  std::array<std::array<MatrixCell, kBarrierCategoryCount>, kConcernLevelCount> cells_{};
};

/// Counts the unresolved findings in `cell` and compares against `threshold`.
bool evidence_marks_cell(const MatrixCell& cell, int threshold);

struct PerformanceSnapshot {
  double ds = 0.0;   // application-server availability
  double qos = 0.0;  // network availability
  double ts = 0.0;   // end-user satisfaction

  bool operator==(const PerformanceSnapshot&) const = default;
};

void validate_snapshot(const PerformanceSnapshot& snapshot);

struct WeightConfig {
  double w_pi = 1.0;
  double w_dc = 1.0;
  double w_po = 1.0;

  bool operator==(const WeightConfig&) const = default;
};

void validate_weights(const WeightConfig& weights);

struct ScoreBreakdown {
  double pi = 0.0;
  double dc = 0.0;
  double po = 0.0;
  double ratlop = 0.0;
  WeightConfig weights;
  std::map<std::string, double> per_org_pi;

  bool operator==(const ScoreBreakdown&) const = default;
};

struct PotentialityResult {
  double pi = 0.0;
  std::map<std::string, double> per_org;
};

double quantify_potentiality(int imml);
PotentialityResult aggregate_potentiality(std::span<const MaturityAssessment> assessments);
double compute_compatibility(const CompatibilityMatrix& matrix);
double compute_performance(const PerformanceSnapshot& snapshot);
double compute_ratlop(double pi, double dc, double po, const WeightConfig& weights = {});

/// Runs the five measurement steps over inputs already checked against a
/// model. Used directly when the organization set is implied by `maturity`.
ScoreBreakdown assess_inputs(std::span<const MaturityAssessment> maturity,
                             const CompatibilityMatrix& matrix,
                             const PerformanceSnapshot& perf, const WeightConfig& weights);

/// As `assess_inputs`, but first requires exactly one maturity assessment per
/// organization of `model`.
ScoreBreakdown assess(const BcnModel& model, std::span<const MaturityAssessment> maturity,
                      const CompatibilityMatrix& matrix, const PerformanceSnapshot& perf,
                      const WeightConfig& weights);

/// Half-even rounding to 6 decimals, the precision of every exported score.
double round_export(double value);

}  // namespace ratlop
