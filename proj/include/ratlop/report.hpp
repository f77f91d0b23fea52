#pragma once

#include <string>
#include <vector>

#include "ratlop/model.hpp"
#include "ratlop/planner.hpp"
#include "ratlop/scoring.hpp"
#include "ratlop/timeline.hpp"

// Plain-text renderings for the command line. Scores always carry 6 decimals.

namespace ratlop {

std::string format_score(double value);
std::string format_violations(const std::vector<Violation>& violations);
std::string format_breakdown(const PeriodId& period, int revision, const ScoreBreakdown& scores);
std::string format_trend(const Trend& trend);
std::string format_scenario(const Scenario& scenario);

}  // namespace ratlop
