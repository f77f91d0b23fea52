#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ratlop/model.hpp"
#include "ratlop/scoring.hpp"
#include "ratlop/survey.hpp"

namespace ratlop {

/// One recorded assessment of a network for one period. Scores are stored
/// alongside their inputs and re-verified whenever the document is loaded.
struct PeriodAssessment {
  PeriodId period;
  std::vector<MaturityAssessment> maturity;
  CompatibilityMatrix matrix;
  PerformanceSnapshot snapshot;
  std::optional<SnapshotProvenance> provenance;
  WeightConfig weights;
  ScoreBreakdown scores;
  std::string recorded_at;  // ISO-8601 UTC, filled by the store when empty
  int revision = 0;         // assigned by the store

  bool operator==(const PeriodAssessment&) const = default;
};

/// Builds an assessment with scores computed from its inputs.
PeriodAssessment make_assessment(PeriodId period, std::vector<MaturityAssessment> maturity,
                                 CompatibilityMatrix matrix, PerformanceSnapshot snapshot,
                                 WeightConfig weights = {});

/// Throws an Integrity error if the stored Ratlop (or any component) differs
/// from recomputation by more than kScoreEpsilon.
void verify_scores(const PeriodAssessment& assessment);

struct Trend {
  std::vector<PeriodId> periods;
  std::vector<double> ratlop;
  std::vector<double> pi;
  std::vector<double> dc;
  std::vector<double> po;
  std::vector<double> deltas;  // ratlop[i+1] - ratlop[i]

  bool operator==(const Trend&) const = default;
};

/// Builds a trend from assessments already ordered by period.
Trend make_trend(const std::vector<PeriodAssessment>& ordered);

/// CSV dump with header `period,pi,dc,po,ratlop`, scores at 6 decimals.
std::string trend_csv(const Trend& trend);

/// Append-only, revisioned document store. Layout under `root`:
///
///   <bcn_id>/model
///   <bcn_id>/assessments/<ordinal>.<revision>
///
/// Writes are serialized per store instance and across processes through a
/// lock file; documents are written to a temporary file and renamed, so a
/// reader never observes a partial document.
class TimelineStore {
public:
  using Clock = std::function<std::string()>;

  explicit TimelineStore(std::filesystem::path root, Clock clock = {});

  const std::filesystem::path& root() const { return root_; }

  bool has_bcn(const std::string& bcn_id) const;

  /// Validates and stores the model document. Returns true if the BCN is new.
  bool put_model(const BcnModel& model);
  BcnModel get_model(const std::string& bcn_id) const;
  /// The stored model document, byte for byte.
  std::string get_model_document(const std::string& bcn_id) const;

  /// Verifies scores, checks the organizations against the model, and appends
  /// a new revision for the period. Returns the revision number.
  int record_assessment(const std::string& bcn_id, PeriodAssessment assessment);

  /// Latest revision per period with from.ordinal <= ordinal <= to.ordinal,
  /// ordered by ordinal. Unbounded ends when the arguments are empty.
  Trend get_trend(const std::string& bcn_id, const std::optional<PeriodId>& from,
                  const std::optional<PeriodId>& to) const;

  PeriodAssessment latest_assessment(const std::string& bcn_id) const;

  /// Resolves a label to a recorded period, if any.
  std::optional<PeriodId> find_period(const std::string& bcn_id, const std::string& label) const;
  PeriodAssessment get_assessment(const std::string& bcn_id, std::int64_t ordinal,
                                  std::optional<int> revision = std::nullopt) const;
  /// The stored assessment document, byte for byte.
  std::string get_assessment_document(const std::string& bcn_id, std::int64_t ordinal,
                                      int revision) const;

  struct RevisionKey {
    std::int64_t ordinal;
    int revision;
    auto operator<=>(const RevisionKey&) const = default;
  };
  std::vector<RevisionKey> revisions(const std::string& bcn_id) const;

private:
  std::filesystem::path bcn_dir(const std::string& bcn_id) const;
  void require_bcn(const std::string& bcn_id) const;
  std::vector<PeriodAssessment> latest_per_period(const std::string& bcn_id) const;

  std::filesystem::path root_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
};

std::string utc_timestamp_now();

}  // namespace ratlop
