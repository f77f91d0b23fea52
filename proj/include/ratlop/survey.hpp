#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratlop/model.hpp"
#include "ratlop/scoring.hpp"

namespace ratlop {

struct ServerAvailability {
  std::string server_id;
  double availability = 0.0;
  PeriodId period;
};

struct LinkAvailability {
  std::string link_id;
  double availability = 0.0;
  PeriodId period;
};

struct SurveyResponse {
  std::string respondent_id;
  int rating = 0;
  PeriodId period;
};

enum class AggregationMode { Mean, Min };

std::string_view to_string(AggregationMode mode);
std::optional<AggregationMode> parse_aggregation_mode(std::string_view text);

/// Maps a rating on 1..scale_max onto [0,1].
double normalize_rating(int rating, int scale_max, std::string_view respondent_id = {});

/// Mean of normalized ratings. All responses must share one period.
double compute_ts(std::span<const SurveyResponse> responses, int scale_max);

double aggregate_availability(std::span<const double> values,
                              AggregationMode mode = AggregationMode::Mean);

enum class IndicatorSource { Computed, Overridden };

std::string_view to_string(IndicatorSource source);
std::optional<IndicatorSource> parse_indicator_source(std::string_view text);

struct SnapshotConfig {
  int scale_max = 5;
  AggregationMode availability_mode = AggregationMode::Mean;
  std::optional<double> ds_override;
  std::optional<double> qos_override;
  std::optional<double> ts_override;
};

/// How each indicator of a snapshot was obtained.
struct SnapshotProvenance {
  IndicatorSource ds = IndicatorSource::Computed;
  IndicatorSource qos = IndicatorSource::Computed;
  IndicatorSource ts = IndicatorSource::Computed;
  AggregationMode availability_mode = AggregationMode::Mean;
  int scale_max = 5;

  bool operator==(const SnapshotProvenance&) const = default;
};

struct SnapshotResult {
  PerformanceSnapshot snapshot;
  SnapshotProvenance provenance;
};

/// Overrides win over raw data; an indicator with neither is an error.
SnapshotResult build_snapshot(std::span<const ServerAvailability> servers,
                              std::span<const LinkAvailability> links,
                              std::span<const SurveyResponse> responses,
                              const SnapshotConfig& config);

// CSV import. Each parser validates every row and throws one Input error
// listing all bad rows (with 1-based line numbers) if any row fails.
std::vector<ServerAvailability> parse_server_csv(std::string_view text, const PeriodId& period);
std::vector<LinkAvailability> parse_link_csv(std::string_view text, const PeriodId& period);
std::vector<SurveyResponse> parse_survey_csv(std::string_view text, const PeriodId& period,
                                             int scale_max);

}  // namespace ratlop
