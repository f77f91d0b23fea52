#include "ratlop/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ratlop/errors.hpp"

namespace ratlop {

namespace {

constexpr double kCostTolerance = 1e-9;

double& indicator_ref(PerformanceSnapshot& s, Indicator which) {
  switch (which) {
    case Indicator::DS: return s.ds;
    case Indicator::QoS: return s.qos;
    case Indicator::TS: return s.ts;
  }
  return s.ts;
}

double indicator_value(const PerformanceSnapshot& s, Indicator which) {
  auto copy = s;
  return indicator_ref(copy, which);
}

int action_rank(const ImprovementAction& a) { return static_cast<int>(a.index()); }

// Largest grid index whose value does not exceed `value`.
long grid_floor(double value, int intervals) {
  return static_cast<long>(std::floor(value * intervals + 1e-9));
}

}  // namespace

std::string_view to_string(Indicator indicator) {
  switch (indicator) {
    case Indicator::DS: return "ds";
    case Indicator::QoS: return "qos";
    case Indicator::TS: return "ts";
  }
  return "";
}

std::optional<Indicator> parse_indicator(std::string_view text) {
  for (auto i : {Indicator::DS, Indicator::QoS, Indicator::TS})
    if (to_string(i) == text) return i;
  return std::nullopt;
}

std::string describe(const ImprovementAction& action) {
  std::ostringstream out;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, RaiseMaturity>) {
          out << "raise maturity of " << a.org_id << " to level " << a.to_level;
        } else if constexpr (std::is_same_v<T, ResolveCell>) {
          out << "resolve " << to_string(a.barrier) << " incompatibility at " << to_string(a.level)
              << " level";
        } else {
          out << "improve " << to_string(a.which) << " to " << a.to_value;
        }
      },
      action);
  return out.str();
}

bool action_less(const ImprovementAction& a, const ImprovementAction& b) {
  if (action_rank(a) != action_rank(b)) return action_rank(a) < action_rank(b);
  if (const auto* ra = std::get_if<RaiseMaturity>(&a)) {
    const auto& rb = std::get<RaiseMaturity>(b);
    return std::tie(ra->org_id, ra->to_level) < std::tie(rb.org_id, rb.to_level);
  }
  if (const auto* ca = std::get_if<ResolveCell>(&a)) {
    const auto& cb = std::get<ResolveCell>(b);
    return std::tie(ca->level, ca->barrier) < std::tie(cb.level, cb.barrier);
  }
  const auto& ia = std::get<ImproveIndicator>(a);
  const auto& ib = std::get<ImproveIndicator>(b);
  return std::tie(ia.which, ia.to_value) < std::tie(ib.which, ib.to_value);
}

double CostModel::cell_cost(BarrierCategory barrier) const {
  switch (family_of(barrier)) {
    case BarrierFamily::Conceptual: return cost_conceptual_cell;
    case BarrierFamily::Organizational: return cost_organizational_cell;
    case BarrierFamily::Technical: return cost_technical_cell;
  }
  return cost_technical_cell;
}

int CostModel::grid_intervals() const { return static_cast<int>(std::lround(1.0 / indicator_step)); }

void validate_costs(const CostModel& c) {
  for (double v : {c.cost_per_maturity_level, c.cost_conceptual_cell, c.cost_organizational_cell,
                   c.cost_technical_cell, c.cost_per_indicator_step}) {
    if (!std::isfinite(v) || v <= 0.0) fail(ErrorCode::Validation, "every cost must be positive");
  }
  if (!std::isfinite(c.indicator_step) || c.indicator_step <= 0.0 || c.indicator_step > 1.0)
    fail(ErrorCode::Validation, "indicator step must lie in (0,1]");
  const double intervals = 1.0 / c.indicator_step;
  if (std::fabs(intervals - std::round(intervals)) > 1e-9)
    fail(ErrorCode::Validation, "indicator step must divide 1 evenly");
}

AssessmentState AssessmentState::from(const PeriodAssessment& a) {
  return {a.maturity, a.matrix, a.snapshot, a.weights};
}

ScoreBreakdown AssessmentState::score() const {
  return assess_inputs(maturity, matrix, snapshot, weights);
}

void apply_action(AssessmentState& state, const ImprovementAction& action) {
  auto reject = [&](const std::string& why) {
    fail(ErrorCode::Validation, "invalid action '" + describe(action) + "': " + why,
         {{"action", describe(action)}});
  };
  if (const auto* raise = std::get_if<RaiseMaturity>(&action)) {
    auto it = std::find_if(state.maturity.begin(), state.maturity.end(),
                           [&](const MaturityAssessment& m) { return m.org_id == raise->org_id; });
    if (it == state.maturity.end()) reject("organization is not assessed");
    if (raise->to_level > 5) reject("level exceeds 5");
    if (raise->to_level <= it->imml)
      reject("organization is already at level " + std::to_string(it->imml));
    it->imml = raise->to_level;
  } else if (const auto* resolve = std::get_if<ResolveCell>(&action)) {
    auto& cell = state.matrix.cell(resolve->level, resolve->barrier);
    if (!cell.marked) reject("cell is not marked");
    cell.marked = false;
    for (auto& f : cell.evidence) f.resolved = true;
  } else {
    const auto& improve = std::get<ImproveIndicator>(action);
    double& value = indicator_ref(state.snapshot, improve.which);
    if (!std::isfinite(improve.to_value) || improve.to_value > 1.0) reject("value exceeds 1");
    if (improve.to_value <= value) reject("value does not improve on " + std::to_string(value));
    value = improve.to_value;
  }
}

double action_cost(const AssessmentState& before, const ImprovementAction& action,
                   const CostModel& costs) {
  if (const auto* raise = std::get_if<RaiseMaturity>(&action)) {
    for (const auto& m : before.maturity)
      if (m.org_id == raise->org_id) return (raise->to_level - m.imml) * costs.cost_per_maturity_level;
    return 0.0;
  }
  if (const auto* resolve = std::get_if<ResolveCell>(&action)) return costs.cell_cost(resolve->barrier);
  const auto& improve = std::get<ImproveIndicator>(action);
  const int n = costs.grid_intervals();
  const double current = indicator_value(before.snapshot, improve.which);
  const long steps = std::max<long>(
      1, static_cast<long>(std::ceil(improve.to_value * n - 1e-9)) - grid_floor(current, n));
  return static_cast<double>(steps) * costs.cost_per_indicator_step;
}

ScoreBreakdown simulate(const PeriodAssessment& asis,
                        const std::vector<ImprovementAction>& actions) {
  auto state = AssessmentState::from(asis);
  for (const auto& action : actions) apply_action(state, action);
  return state.score();
}

namespace {

struct MaturityOption {
  int level;  // PI floor after the raise
  double cost;
  std::vector<ImprovementAction> actions;
};

struct CellOption {
  double cost;
  int resolved;
  std::vector<ImprovementAction> actions;
};

struct IndicatorOption {
  double value;
  double cost;
  std::optional<ImprovementAction> action;
};

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<ImprovementAction> actions;
};

bool lexicographically_less(const std::vector<ImprovementAction>& a,
                            const std::vector<ImprovementAction>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), action_less);
}

// Strict preference: cheaper, then fewer actions, then smaller action list.
bool better(double cost, const std::vector<ImprovementAction>& actions, const Candidate& best) {
  if (cost < best.cost - kCostTolerance) return true;
  if (cost > best.cost + kCostTolerance) return false;
  if (actions.size() != best.actions.size()) return actions.size() < best.actions.size();
  return lexicographically_less(actions, best.actions);
}

class Search {
public:
  Search(const AssessmentState& asis, double target, const CostModel& costs,
         const PlanOptions& options)
      : asis_(asis), target_(target), costs_(costs),
        deadline_(std::chrono::steady_clock::now() + options.time_budget) {
    const auto& w = asis.weights;
    total_weight_ = w.w_pi + w.w_dc + w.w_po;
    build_maturity_options();
    build_cell_options();
    for (auto which : {Indicator::DS, Indicator::QoS, Indicator::TS})
      indicator_options_.push_back(build_indicator_options(which));
    for (std::size_t i = 0; i < 3; ++i) {
      // Best gain per cost over every reachable value. An off-grid start makes
      // the first step short, so the first step alone is not an upper bound.
      const auto& opts = indicator_options_[i];
      for (std::size_t k = 1; k < opts.size(); ++k)
        indicator_rate_[i] = std::max(
            indicator_rate_[i], (std::cbrt(opts[k].value) - std::cbrt(opts[0].value)) / opts[k].cost);
    }
  }

  Candidate run(bool& completed) {
    seed_incumbent();
    completed = true;
    for (const auto& mat : maturity_options_) {
      for (const auto& cells : cell_options_) {
        if (!visit_pi_dc(mat, cells)) {
          completed = false;
          return best_;
        }
      }
    }
    return best_;
  }

private:
  double ratlop(double pi, double dc, double po) const {
    const auto& w = asis_.weights;
    return (w.w_pi * pi + w.w_dc * dc + w.w_po * po) / total_weight_;
  }

  bool meets_target(double value) const { return value >= target_ - kScoreEpsilon; }

  void build_maturity_options() {
    int floor_level = 5;
    for (const auto& m : asis_.maturity) floor_level = std::min(floor_level, m.imml);
    auto orgs = asis_.maturity;
    std::sort(orgs.begin(), orgs.end(),
              [](const auto& a, const auto& b) { return a.org_id < b.org_id; });
    for (int level = floor_level; level <= 5; ++level) {
      MaturityOption opt{level, 0.0, {}};
      for (const auto& m : orgs) {
        if (m.imml >= level) continue;
        opt.cost += (level - m.imml) * costs_.cost_per_maturity_level;
        opt.actions.push_back(RaiseMaturity{m.org_id, level});
      }
      maturity_options_.push_back(std::move(opt));
    }
  }

  void build_cell_options() {
    struct Marked {
      double cost;
      std::size_t index;
      ResolveCell cell;
    };
    std::vector<Marked> marked;
    for (std::size_t r = 0; r < kConcernLevelCount; ++r)
      for (std::size_t c = 0; c < kBarrierCategoryCount; ++c)
        if (asis_.matrix.marked(kConcernLevels[r], kBarrierCategories[c]))
          marked.push_back({costs_.cell_cost(kBarrierCategories[c]), r * kBarrierCategoryCount + c,
                            {kConcernLevels[r], kBarrierCategories[c]}});
    // For a fixed number of resolved cells, the cheapest set (lowest index on
    // equal cost) dominates every other set of that size.
    std::sort(marked.begin(), marked.end(), [](const Marked& a, const Marked& b) {
      return std::tie(a.cost, a.index) < std::tie(b.cost, b.index);
    });
    marked_count_ = static_cast<int>(marked.size());
    CellOption opt{0.0, 0, {}};
    cell_options_.push_back(opt);
    for (const auto& m : marked) {
      opt.cost += m.cost;
      opt.resolved += 1;
      opt.actions.push_back(m.cell);
      auto sorted = opt;
      std::sort(sorted.actions.begin(), sorted.actions.end(), action_less);
      cell_options_.push_back(std::move(sorted));
    }
    cheapest_cell_ = marked.empty() ? 0.0 : marked.front().cost;
  }

  std::vector<IndicatorOption> build_indicator_options(Indicator which) const {
    const int n = costs_.grid_intervals();
    const double current = indicator_value(asis_.snapshot, which);
    std::vector<IndicatorOption> opts{{current, 0.0, std::nullopt}};
    const long base = grid_floor(current, n);
    for (long k = base + 1; k <= n; ++k) {
      const double value = static_cast<double>(k) / n;
      if (value <= current) continue;
      opts.push_back({value, static_cast<double>(k - base) * costs_.cost_per_indicator_step,
                      ImproveIndicator{which, value}});
    }
    return opts;
  }

  void seed_incumbent() {
    std::vector<ImprovementAction> actions = maturity_options_.back().actions;
    double cost = maturity_options_.back().cost + cell_options_.back().cost;
    actions.insert(actions.end(), cell_options_.back().actions.begin(),
                   cell_options_.back().actions.end());
    for (const auto& opts : indicator_options_) {
      cost += opts.back().cost;
      if (opts.back().action) actions.push_back(*opts.back().action);
    }
    best_ = {cost, std::move(actions)};
  }

  // Admissible lower bound on the extra cost needed to close `gap` using only
  // the families still undecided.
  double cost_lower_bound(double gap, bool cells_open, std::size_t first_open_indicator) const {
    if (gap <= 0.0) return 0.0;
    const auto& w = asis_.weights;
    double rate = 0.0;
    if (cells_open && cheapest_cell_ > 0.0)
      rate = std::max(rate, w.w_dc / total_weight_ / 24.0 / cheapest_cell_);
    for (std::size_t i = first_open_indicator; i < 3; ++i)
      rate = std::max(rate, w.w_po / total_weight_ * indicator_rate_[i]);
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return gap / rate * (1.0 - 1e-12);
  }

  bool prune(double cost, double lower_bound) const {
    return cost + lower_bound > best_.cost + kCostTolerance;
  }

  bool out_of_time() {
    if (++nodes_ % 1024 != 0) return false;
    return std::chrono::steady_clock::now() > deadline_;
  }

  bool visit_pi_dc(const MaturityOption& mat, const CellOption& cells) {
    const double pi = mat.level / 5.0;
    const double dc = static_cast<double>(24 - (marked_count_ - cells.resolved)) / 24.0;
    const double cost = mat.cost + cells.cost;
    if (cost > best_.cost + kCostTolerance) return true;
    if (!meets_target(ratlop(pi, dc, 1.0))) return true;

    const double po_now = compute_performance(asis_.snapshot);
    const double gap = target_ - kScoreEpsilon - ratlop(pi, dc, po_now);
    if (prune(cost, cost_lower_bound(gap, false, 0))) return true;

    std::vector<ImprovementAction> actions = mat.actions;
    actions.insert(actions.end(), cells.actions.begin(), cells.actions.end());
    std::array<double, 3> values{asis_.snapshot.ds, asis_.snapshot.qos, asis_.snapshot.ts};
    return visit_indicator(0, pi, dc, cost, values, actions);
  }

  bool visit_indicator(std::size_t i, double pi, double dc, double cost,
                       std::array<double, 3>& values, std::vector<ImprovementAction>& actions) {
    if (out_of_time()) return false;
    if (i == 3) {
      const double r = ratlop(pi, dc, std::cbrt(values[0] * values[1] * values[2]));
      if (meets_target(r) && better(cost, actions, best_)) best_ = {cost, actions};
      return true;
    }
    for (const auto& opt : indicator_options_[i]) {
      const double next_cost = cost + opt.cost;
      if (next_cost > best_.cost + kCostTolerance) break;  // options sorted by cost
      values[i] = opt.value;
      // Feasibility with every later indicator at 1.
      double best_po = 1.0;
      for (std::size_t k = 0; k <= i; ++k) best_po *= values[k];
      if (!meets_target(ratlop(pi, dc, std::cbrt(best_po)))) continue;
      double po_now = values[0] * values[1] * values[2];
      const double gap = target_ - kScoreEpsilon - ratlop(pi, dc, std::cbrt(po_now));
      if (prune(next_cost, cost_lower_bound(gap, false, i + 1))) continue;

      if (opt.action) actions.push_back(*opt.action);
      const bool ok = visit_indicator(i + 1, pi, dc, next_cost, values, actions);
      if (opt.action) actions.pop_back();
      if (!ok) return false;
    }
    values[i] = indicator_value(asis_.snapshot, static_cast<Indicator>(i));
    return true;
  }

  const AssessmentState& asis_;
  double target_;
  const CostModel& costs_;
  std::chrono::steady_clock::time_point deadline_;
  double total_weight_ = 3.0;
  std::vector<MaturityOption> maturity_options_;
  std::vector<CellOption> cell_options_;
  std::vector<std::vector<IndicatorOption>> indicator_options_;
  std::array<double, 3> indicator_rate_{};
  double cheapest_cell_ = 0.0;
  int marked_count_ = 0;
  Candidate best_;
  std::size_t nodes_ = 0;
};

}  // namespace

Scenario plan(const PeriodAssessment& asis, double target, const CostModel& costs,
              const PlanOptions& options) {
  validate_costs(costs);
  if (!std::isfinite(target) || target < 0.0)
    fail(ErrorCode::Validation, "target must lie in [0,1]");
  if (target > 1.0 + kScoreEpsilon)
    fail(ErrorCode::Infeasible, "target " + std::to_string(target) +
                                    " exceeds the maximum achievable ratio 1.0",
         {{"target", target}, {"maximum", 1.0}});

  const auto state = AssessmentState::from(asis);
  Scenario scenario;
  scenario.target = target;
  scenario.asis = state.score();
  scenario.predicted = scenario.asis;
  if (scenario.asis.ratlop >= target - kScoreEpsilon) return scenario;

  Search search(state, target, costs, options);
  bool completed = false;
  auto best = search.run(completed);
  scenario.optimal = completed;

  std::sort(best.actions.begin(), best.actions.end(), action_less);
  auto working = state;
  for (auto& action : best.actions) {
    const double cost = action_cost(working, action, costs);
    apply_action(working, action);
    scenario.actions.push_back({std::move(action), cost});
    scenario.total_cost += cost;
  }
  scenario.predicted = working.score();
  return scenario;
}

double required_effort(const PeriodAssessment& asis, double target, const CostModel& costs,
                       const PlanOptions& options) {
  return plan(asis, target, costs, options).total_cost;
}

}  // namespace ratlop
