#pragma once

#include <chrono>
#include <string>
#include <variant>
#include <vector>

#include "ratlop/model.hpp"
#include "ratlop/scoring.hpp"
#include "ratlop/timeline.hpp"

namespace ratlop {

enum class Indicator { DS, QoS, TS };

std::string_view to_string(Indicator indicator);
std::optional<Indicator> parse_indicator(std::string_view text);

struct RaiseMaturity {
  std::string org_id;
  int to_level = 1;
  bool operator==(const RaiseMaturity&) const = default;
};

struct ResolveCell {
  ConcernLevel level = ConcernLevel::Business;
  BarrierCategory barrier = BarrierCategory::ConceptualSyntactic;
  bool operator==(const ResolveCell&) const = default;
};

struct ImproveIndicator {
  Indicator which = Indicator::DS;
  double to_value = 0.0;
  bool operator==(const ImproveIndicator&) const = default;
};

using ImprovementAction = std::variant<RaiseMaturity, ResolveCell, ImproveIndicator>;

std::string describe(const ImprovementAction& action);

/// Total order used to list scenario actions and break cost ties:
/// maturity < cells < indicators, then identifier, then target value.
bool action_less(const ImprovementAction& a, const ImprovementAction& b);

/// Effort units per action. Maturity raises cost per level crossed; indicator
/// improvements cost per grid step crossed.
struct CostModel {
  double cost_per_maturity_level = 5.0;
  double cost_conceptual_cell = 1.0;
  double cost_organizational_cell = 1.0;
  double cost_technical_cell = 1.0;
  double cost_per_indicator_step = 0.5;
  double indicator_step = 0.05;

  double cell_cost(BarrierCategory barrier) const;
  /// Number of grid points in [0,1] minus one; 20 for the default step.
  int grid_intervals() const;

  bool operator==(const CostModel&) const = default;
};

void validate_costs(const CostModel& costs);

/// The inputs of an assessment, detached from its stored scores.
struct AssessmentState {
  std::vector<MaturityAssessment> maturity;
  CompatibilityMatrix matrix;
  PerformanceSnapshot snapshot;
  WeightConfig weights;

  static AssessmentState from(const PeriodAssessment& assessment);
  ScoreBreakdown score() const;
};

/// Applies one action, throwing a Validation error naming the action if it is
/// not an improvement of the current state.
void apply_action(AssessmentState& state, const ImprovementAction& action);

double action_cost(const AssessmentState& before, const ImprovementAction& action,
                   const CostModel& costs);

ScoreBreakdown simulate(const PeriodAssessment& asis, const std::vector<ImprovementAction>& actions);

struct PlannedAction {
  ImprovementAction action;
  double cost = 0.0;
};

struct Scenario {
  std::vector<PlannedAction> actions;
  double total_cost = 0.0;
  ScoreBreakdown asis;
  ScoreBreakdown predicted;
  double target = 0.0;
  bool optimal = true;  // false when the time budget ran out first
};

struct PlanOptions {
  std::chrono::milliseconds time_budget{10000};
};

/// Minimal-cost scenario reaching `target` (within kScoreEpsilon) over the
/// discrete action space. Ties are broken by fewer actions, then by the
/// `action_less` order of the sorted action lists.
Scenario plan(const PeriodAssessment& asis, double target, const CostModel& costs = {},
              const PlanOptions& options = {});

double required_effort(const PeriodAssessment& asis, double target, const CostModel& costs = {},
                       const PlanOptions& options = {});

}  // namespace ratlop
