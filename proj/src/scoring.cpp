#include "ratlop/scoring.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <set>

#include "ratlop/errors.hpp"

namespace ratlop {

namespace {

std::size_t row(ConcernLevel level) { return static_cast<std::size_t>(level); }
std::size_t col(BarrierCategory barrier) { return static_cast<std::size_t>(barrier); }

bool is_fraction(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void require_fraction(double v, const char* name) {
  if (!is_fraction(v))
    fail(ErrorCode::Validation, std::string(name) + " must lie in [0,1], got " + std::to_string(v));
}

}  // namespace

CompatibilityMatrix CompatibilityMatrix::from_marks(
    const std::array<std::array<int, kBarrierCategoryCount>, kConcernLevelCount>& marks) {
  CompatibilityMatrix matrix;
  for (std::size_t i = 0; i < kConcernLevelCount; ++i) {
    for (std::size_t j = 0; j < kBarrierCategoryCount; ++j) {
      const int v = marks[i][j];
      if (v != 0 && v != 1)
        fail(ErrorCode::Validation, "matrix cell (" + std::to_string(i + 1) + "," +
                                        std::to_string(j + 1) + ") must be 0 or 1");
      matrix.cells_[i][j].marked = v == 1;
    }
  }
  return matrix;
}

bool evidence_marks_cell(const MatrixCell& cell, int threshold) {
  if (cell.not_applicable) return false;
  const auto open = std::count_if(cell.evidence.begin(), cell.evidence.end(),
                                  [](const Finding& f) { return !f.resolved; });
  return open >= threshold;
}

CompatibilityMatrix CompatibilityMatrix::from_evidence(
    const std::map<std::pair<ConcernLevel, BarrierCategory>, std::vector<Finding>>& evidence,
    int threshold) {
  if (threshold < 1) fail(ErrorCode::Validation, "evidence threshold must be at least 1");
  CompatibilityMatrix matrix;
  for (const auto& [key, findings] : evidence) {
    auto& c = matrix.cell(key.first, key.second);
    c.evidence = findings;
    c.marked = evidence_marks_cell(c, threshold);
  }
  return matrix;
}

const MatrixCell& CompatibilityMatrix::cell(ConcernLevel level, BarrierCategory barrier) const {
  return cells_.at(row(level)).at(col(barrier));
}

MatrixCell& CompatibilityMatrix::cell(ConcernLevel level, BarrierCategory barrier) {
  return cells_.at(row(level)).at(col(barrier));
}

void CompatibilityMatrix::set_marked(ConcernLevel level, BarrierCategory barrier, bool value) {
  auto& c = cell(level, barrier);
  if (value && c.not_applicable)
    fail(ErrorCode::Validation, "cannot mark a not-applicable cell");
  c.marked = value;
}

void CompatibilityMatrix::set_not_applicable(ConcernLevel level, BarrierCategory barrier) {
  auto& c = cell(level, barrier);
  c.not_applicable = true;
  c.marked = false;
}

int CompatibilityMatrix::marked_count() const {
  int count = 0;
  for (const auto& r : cells_)
    for (const auto& c : r) count += c.marked ? 1 : 0;
  return count;
}

void validate_snapshot(const PerformanceSnapshot& snapshot) {
  require_fraction(snapshot.ds, "DS");
  require_fraction(snapshot.qos, "QoS");
  require_fraction(snapshot.ts, "TS");
}

void validate_weights(const WeightConfig& weights) {
  for (double w : {weights.w_pi, weights.w_dc, weights.w_po})
    if (!std::isfinite(w) || w < 0.0)
      fail(ErrorCode::Validation, "weights must be finite and non-negative");
  if (weights.w_pi + weights.w_dc + weights.w_po <= 0.0)
    fail(ErrorCode::Validation, "at least one weight must be positive");
}

double quantify_potentiality(int imml) {
  if (imml < 1 || imml > 5)
    fail(ErrorCode::Validation, "maturity level must be in 1..5, got " + std::to_string(imml));
  // imml/5 is the correctly rounded value of 0.2*imml (0.2*3 is not 0.6 in binary).
  return imml / 5.0;
}

PotentialityResult aggregate_potentiality(std::span<const MaturityAssessment> assessments) {
  if (assessments.empty())
    fail(ErrorCode::Validation, "at least one maturity assessment is required");
  PotentialityResult result;
  result.pi = 1.0;
  for (const auto& a : assessments) {
    const double pi_k = quantify_potentiality(a.imml);
    if (!result.per_org.emplace(a.org_id, pi_k).second)
      fail(ErrorCode::Validation, "organization '" + a.org_id + "' is assessed twice",
           {{"org_id", a.org_id}});
    result.pi = std::min(result.pi, pi_k);
  }
  return result;
}

double compute_compatibility(const CompatibilityMatrix& matrix) {
  constexpr int cells = kConcernLevelCount * kBarrierCategoryCount;
  return static_cast<double>(cells - matrix.marked_count()) / cells;
}

double compute_performance(const PerformanceSnapshot& snapshot) {
  validate_snapshot(snapshot);
  return std::cbrt(snapshot.ds * snapshot.qos * snapshot.ts);
}

double compute_ratlop(double pi, double dc, double po, const WeightConfig& weights) {
  require_fraction(pi, "PI");
  require_fraction(dc, "DC");
  require_fraction(po, "PO");
  validate_weights(weights);
  const double total = weights.w_pi + weights.w_dc + weights.w_po;
  const double value = (weights.w_pi * pi + weights.w_dc * dc + weights.w_po * po) / total;
  return std::clamp(value, 0.0, 1.0);
}

ScoreBreakdown assess_inputs(std::span<const MaturityAssessment> maturity,
                             const CompatibilityMatrix& matrix, const PerformanceSnapshot& perf,
                             const WeightConfig& weights) {
  auto potentiality = aggregate_potentiality(maturity);
  ScoreBreakdown out;
  out.pi = potentiality.pi;
  out.per_org_pi = std::move(potentiality.per_org);
  out.dc = compute_compatibility(matrix);
  out.po = compute_performance(perf);
  out.weights = weights;
  out.ratlop = compute_ratlop(out.pi, out.dc, out.po, weights);
  return out;
}

ScoreBreakdown assess(const BcnModel& model, std::span<const MaturityAssessment> maturity,
                      const CompatibilityMatrix& matrix, const PerformanceSnapshot& perf,
                      const WeightConfig& weights) {
  std::set<std::string> assessed;
  for (const auto& a : maturity) {
    if (!model.find_organization(a.org_id))
      fail(ErrorCode::Validation,
           "maturity given for organization '" + a.org_id + "' which is not in the network",
           {{"org_id", a.org_id}});
    assessed.insert(a.org_id);
  }
  for (const auto& org : model.organizations)
    if (!assessed.count(org.org_id))
      fail(ErrorCode::Validation, "missing maturity level for organization '" + org.org_id + "'",
           {{"org_id", org.org_id}});
  return assess_inputs(maturity, matrix, perf, weights);
}

double round_export(double value) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double scaled = std::nearbyint(value * 1e6);
  std::fesetround(saved);
  return scaled / 1e6;
}

}  // namespace ratlop
