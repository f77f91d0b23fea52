#include "ratlop/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ratlop/errors.hpp"
#include "text.hpp"

namespace ratlop {

std::string_view to_string(AggregationMode mode) {
  return mode == AggregationMode::Min ? "min" : "mean";
}

std::optional<AggregationMode> parse_aggregation_mode(std::string_view text) {
  if (text == "mean") return AggregationMode::Mean;
  if (text == "min") return AggregationMode::Min;
  return std::nullopt;
}

std::string_view to_string(IndicatorSource source) {
  return source == IndicatorSource::Overridden ? "overridden" : "computed";
}

std::optional<IndicatorSource> parse_indicator_source(std::string_view text) {
  if (text == "computed") return IndicatorSource::Computed;
  if (text == "overridden") return IndicatorSource::Overridden;
  return std::nullopt;
}

double normalize_rating(int rating, int scale_max, std::string_view respondent_id) {
  if (scale_max < 2)
    fail(ErrorCode::Validation, "rating scale must have at least 2 points");
  if (rating < 1 || rating > scale_max)
    fail(ErrorCode::Validation,
         "rating " + std::to_string(rating) + " of respondent '" + std::string(respondent_id) +
             "' is outside 1.." + std::to_string(scale_max),
         {{"respondent_id", respondent_id}});
  return static_cast<double>(rating - 1) / (scale_max - 1);
}

double compute_ts(std::span<const SurveyResponse> responses, int scale_max) {
  if (responses.empty())
    fail(ErrorCode::Validation, "end-user satisfaction needs at least one survey response");
  const auto& period = responses.front().period;
  double sum = 0.0;
  for (const auto& r : responses) {
    if (r.period.ordinal != period.ordinal)
      fail(ErrorCode::Validation, "survey responses span more than one period",
           {{"respondent_id", r.respondent_id}});
    sum += normalize_rating(r.rating, scale_max, r.respondent_id);
  }
  return sum / static_cast<double>(responses.size());
}

double aggregate_availability(std::span<const double> values, AggregationMode mode) {
  if (values.empty()) fail(ErrorCode::Validation, "availability list is empty");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      fail(ErrorCode::Validation, "availability must lie in [0,1], got " + std::to_string(v));
  if (mode == AggregationMode::Min) return *std::min_element(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

template <typename Items>
std::vector<double> availabilities(const Items& items) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.availability);
  return out;
}

double resolve(const char* name, const std::optional<double>& override_value, bool has_data,
               IndicatorSource& source, auto compute) {
  if (override_value) {
    if (!std::isfinite(*override_value) || *override_value < 0.0 || *override_value > 1.0)
      fail(ErrorCode::Validation, std::string(name) + " override must lie in [0,1]");
    source = IndicatorSource::Overridden;
    return *override_value;
  }
  if (!has_data)
    fail(ErrorCode::Validation, std::string(name) + " has neither data nor an override value",
         {{"indicator", name}});
  source = IndicatorSource::Computed;
  return compute();
}

}  // namespace

SnapshotResult build_snapshot(std::span<const ServerAvailability> servers,
                              std::span<const LinkAvailability> links,
                              std::span<const SurveyResponse> responses,
                              const SnapshotConfig& config) {
  SnapshotResult out;
  out.provenance.availability_mode = config.availability_mode;
  out.provenance.scale_max = config.scale_max;
  out.snapshot.ds = resolve("DS", config.ds_override, !servers.empty(), out.provenance.ds, [&] {
    return aggregate_availability(availabilities(servers), config.availability_mode);
  });
  out.snapshot.qos = resolve("QoS", config.qos_override, !links.empty(), out.provenance.qos, [&] {
    return aggregate_availability(availabilities(links), config.availability_mode);
  });
  out.snapshot.ts = resolve("TS", config.ts_override, !responses.empty(), out.provenance.ts,
                            [&] { return compute_ts(responses, config.scale_max); });
  validate_snapshot(out.snapshot);
  return out;
}

namespace {

struct RowError {
  std::size_t line;
  std::string message;
};

[[noreturn]] void reject(std::string_view what, const std::vector<RowError>& errors) {
  nlohmann::json details = nlohmann::json::array();
  std::string message = std::string(what) + " import rejected:";
  for (const auto& e : errors) {
    details.push_back({{"line", e.line}, {"message", e.message}});
    message += " line " + std::to_string(e.line) + ": " + e.message + ";";
  }
  message.pop_back();
  fail(ErrorCode::Input, message, {{"rows", details}});
}

// Shared two-column reader: header check, then one callback per data row.
template <typename OnRow>
void read_two_columns(std::string_view text, std::string_view what, std::string_view col0,
                      std::string_view col1, OnRow on_row) {
  const auto rows = text::lines(text);
  std::vector<RowError> errors;
  if (rows.empty()) {
    errors.push_back({1, "missing header '" + std::string(col0) + "," + std::string(col1) + "'"});
    reject(what, errors);
  }
  const auto header = text::fields(rows.front().content);
  if (header.size() != 2 || header[0] != col0 || header[1] != col1) {
    errors.push_back({rows.front().number,
                      "expected header '" + std::string(col0) + "," + std::string(col1) + "'"});
    reject(what, errors);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = text::fields(rows[i].content);
    if (f.size() != 2) {
      errors.push_back({rows[i].number, "expected 2 fields, found " + std::to_string(f.size())});
      continue;
    }
    if (f[0].empty()) {
      errors.push_back({rows[i].number, "empty identifier"});
      continue;
    }
    if (auto msg = on_row(f[0], f[1]); !msg.empty()) errors.push_back({rows[i].number, msg});
  }
  if (!errors.empty()) reject(what, errors);
}

template <typename Item>
std::vector<Item> parse_availability(std::string_view text, const PeriodId& period,
                                     std::string_view what) {
  std::vector<Item> out;
  read_two_columns(text, what, "id", "availability",
                   [&](std::string_view id, std::string_view value) -> std::string {
                     auto v = text::to_double(value);
                     if (!v) return "availability '" + std::string(value) + "' is not a decimal";
                     if (*v < 0.0 || *v > 1.0)
                       return "availability " + std::string(value) + " is outside [0,1]";
                     out.push_back({std::string(id), *v, period});
                     return {};
                   });
  return out;
}

}  // namespace

std::vector<ServerAvailability> parse_server_csv(std::string_view text, const PeriodId& period) {
  return parse_availability<ServerAvailability>(text, period, "server availability");
}

std::vector<LinkAvailability> parse_link_csv(std::string_view text, const PeriodId& period) {
  return parse_availability<LinkAvailability>(text, period, "link availability");
}

std::vector<SurveyResponse> parse_survey_csv(std::string_view text, const PeriodId& period,
                                             int scale_max) {
  if (scale_max < 2) fail(ErrorCode::Validation, "rating scale must have at least 2 points");
  std::vector<SurveyResponse> out;
  read_two_columns(text, "survey", "respondent", "rating",
                   [&](std::string_view id, std::string_view value) -> std::string {
                     auto v = text::to_int(value);
                     if (!v) return "rating '" + std::string(value) + "' is not an integer";
                     if (*v < 1 || *v > scale_max)
                       return "rating " + std::string(value) + " of respondent '" +
                              std::string(id) + "' is outside 1.." + std::to_string(scale_max);
                     out.push_back({std::string(id), static_cast<int>(*v), period});
                     return {};
                   });
  return out;
}

}  // namespace ratlop
