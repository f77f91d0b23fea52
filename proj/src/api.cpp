#include "ratlop/api.hpp"

#include <chrono>
#include <vector>

#include "ratlop/inputs.hpp"
#include "ratlop/planner.hpp"
#include "ratlop/serialize.hpp"
#include "text.hpp"

namespace ratlop {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return 422;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Integrity: return 500;
    case ErrorCode::Infeasible: return 422;
    case ErrorCode::Conflict: return 409;
    case ErrorCode::Input: return 400;
  }
  return 500;
}

std::string api_error_code(ErrorCode code) {
  // Malformed input is reported as a validation failure on the wire.
  if (code == ErrorCode::Input) return "validation";
  return std::string(to_string(code));
}

HttpResponse error_response(const Error& error) {
  json body = {{"error",
                {{"code", api_error_code(error.code())},
                 {"message", error.what()},
                 {"details", error.details()}}}};
  return {http_status(error.code()), body.dump()};
}

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  for (auto part : text::fields(path, '/'))
    if (!part.empty()) parts.emplace_back(part);
  return parts;
}

bool flag(const std::map<std::string, std::string>& query, const std::string& key) {
  auto it = query.find(key);
  return it != query.end() && (it->second == "true" || it->second == "1");
}

struct UnsupportedMediaType {
  std::string content_type;
};

json parse_body(const HttpRequest& request) {
  if (!request.content_type.starts_with("application/json"))
    throw UnsupportedMediaType{request.content_type};
  return parse_document(request.body, "request body");
}

// Resolves a period path segment: quarter labels are canonical, other labels
// must already be recorded or carry an explicit ordinal.
PeriodId resolve_period(const TimelineStore& store, const std::string& bcn_id,
                        const std::string& label, std::optional<std::int64_t> ordinal) {
  if (!ordinal) {
    if (auto known = store.find_period(bcn_id, label)) return *known;
  }
  return canonical_period(label, ordinal);
}

std::optional<std::int64_t> query_ordinal(const std::map<std::string, std::string>& query,
                                          const std::string& key) {
  auto it = query.find(key);
  if (it == query.end()) return std::nullopt;
  auto v = text::to_int(it->second);
  if (!v) fail(ErrorCode::Input, key + " must be an integer");
  return *v;
}

IndicatorInputs indicators_from_json(const json& j, const PeriodId& period) {
  IndicatorInputs in;
  in.config.scale_max = j.value("scale_max", 5);
  const auto mode_text = j.value("availability_mode", std::string("mean"));
  auto mode = parse_aggregation_mode(mode_text);
  if (!mode) fail(ErrorCode::Validation, "unknown availability mode '" + mode_text + "'");
  in.config.availability_mode = *mode;
  if (j.contains("overrides")) {
    const auto& o = j.at("overrides");
    if (o.contains("ds")) in.config.ds_override = o.at("ds").get<double>();
    if (o.contains("qos")) in.config.qos_override = o.at("qos").get<double>();
    if (o.contains("ts")) in.config.ts_override = o.at("ts").get<double>();
  }
  if (j.contains("servers_csv"))
    in.servers = parse_server_csv(j.at("servers_csv").get<std::string>(), period);
  if (j.contains("links_csv"))
    in.links = parse_link_csv(j.at("links_csv").get<std::string>(), period);
  if (j.contains("survey_csv"))
    in.responses =
        parse_survey_csv(j.at("survey_csv").get<std::string>(), period, in.config.scale_max);
  return in;
}

}  // namespace

HttpResponse ApiService::handle(const HttpRequest& request) const {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const UnsupportedMediaType& e) {
    auto response = error_response(
        Error(ErrorCode::Input, "request body must be application/json",
              {{"content_type", e.content_type}}));
    response.status = 415;
    return response;
  } catch (const json::exception& e) {
    return error_response(Error(ErrorCode::Input, std::string("malformed request: ") + e.what()));
  } catch (const std::exception& e) {
    return error_response(Error(ErrorCode::Integrity, std::string("internal error: ") + e.what()));
  }
}

HttpResponse ApiService::route(const HttpRequest& req) const {
  const auto parts = split_path(req.path);
  if (parts.size() < 2 || parts[0] != "bcns")
    fail(ErrorCode::NotFound, "no resource at '" + req.path + "'");
  const std::string& bcn_id = parts[1];
  auto method_not_allowed = [&]() -> HttpResponse {
    return json_response(405, {{"error",
                                 {{"code", "validation"},
                                  {"message", req.method + " is not supported on " + req.path},
                                  {"details", nullptr}}}});
  };

  // /bcns/{id}
  if (parts.size() == 2) {
    if (req.method == "GET") return {200, store_.get_model_document(bcn_id)};
    if (req.method == "PUT") {
      auto model = bcn_from_json(parse_body(req));
      if (model.bcn_id != bcn_id)
        fail(ErrorCode::Validation, "document bcn_id '" + model.bcn_id +
                                        "' does not match the resource '" + bcn_id + "'");
      const bool created = store_.put_model(model);
      return json_response(created ? 201 : 200, {{"bcn_id", bcn_id}, {"created", created}});
    }
    return method_not_allowed();
  }

  const std::string& resource = parts[2];

  if (resource == "assessments" && parts.size() == 4) {
    const std::string& label = parts[3];
    if (req.method == "GET") {
      const auto period = resolve_period(store_, bcn_id, label, query_ordinal(req.query, "ordinal"));
      std::optional<int> revision;
      if (auto r = query_ordinal(req.query, "revision")) revision = static_cast<int>(*r);
      if (!revision) revision = store_.get_assessment(bcn_id, period.ordinal).revision;
      const auto document = store_.get_assessment_document(bcn_id, period.ordinal, *revision);
      verify_scores(assessment_from_json(parse_document(document, "assessment")));
      return {200, document};
    }
    if (req.method == "POST") {
      const auto body = parse_body(req);
      const auto model = store_.get_model(bcn_id);
      std::optional<std::int64_t> ordinal;
      if (body.contains("period_ordinal")) ordinal = body.at("period_ordinal").get<std::int64_t>();
      AssessmentInputs inputs;
      inputs.period = resolve_period(store_, bcn_id, label, ordinal);
      if (!body.contains("maturity")) fail(ErrorCode::Validation, "maturity levels are missing");
      if (!body.contains("matrix")) fail(ErrorCode::Validation, "compatibility matrix is missing");
      inputs.maturity = body.at("maturity").get<std::vector<MaturityAssessment>>();
      inputs.matrix = body.at("matrix").get<CompatibilityMatrix>();
      if (body.contains("snapshot"))
        inputs.snapshot = body.at("snapshot").get<PerformanceSnapshot>();
      else if (body.contains("indicators"))
        inputs.indicators = indicators_from_json(body.at("indicators"), inputs.period);
      if (body.contains("weights")) inputs.weights = body.at("weights").get<WeightConfig>();

      auto assessment = prepare_assessment(model, inputs);
      const bool dry_run = flag(req.query, "dry_run") || body.value("dry_run", false);
      json out = {{"bcn_id", bcn_id},
                  {"period", assessment.period},
                  {"dry_run", dry_run},
                  {"scores", assessment.scores},
                  {"snapshot", assessment.snapshot},
                  {"provenance", assessment.provenance ? json(*assessment.provenance) : json()},
                  {"revision", nullptr}};
      if (dry_run) return json_response(200, out);
      out["revision"] = store_.record_assessment(bcn_id, std::move(assessment));
      return json_response(201, out);
    }
    return method_not_allowed();
  }

  if (resource == "trend" && parts.size() == 3) {
    if (req.method != "GET") return method_not_allowed();
    std::optional<PeriodId> from, to;
    if (auto it = req.query.find("from"); it != req.query.end())
      from = resolve_period(store_, bcn_id, it->second, query_ordinal(req.query, "from_ordinal"));
    if (auto it = req.query.find("to"); it != req.query.end())
      to = resolve_period(store_, bcn_id, it->second, query_ordinal(req.query, "to_ordinal"));
    json out = store_.get_trend(bcn_id, from, to);
    out["bcn_id"] = bcn_id;
    return json_response(200, out);
  }

  if (resource == "plan" && parts.size() == 3) {
    if (req.method != "POST") return method_not_allowed();
    const auto body = parse_body(req);
    if (!body.contains("target")) fail(ErrorCode::Validation, "target is missing");
    const double target = body.at("target").get<double>();
    CostModel costs;
    if (body.contains("costs")) costs = body.at("costs").get<CostModel>();
    PlanOptions options;
    if (body.contains("time_budget_ms"))
      options.time_budget = std::chrono::milliseconds(body.at("time_budget_ms").get<long>());
    const auto asis = store_.latest_assessment(bcn_id);
    auto out = scenario_to_json(plan(asis, target, costs, options));
    out["bcn_id"] = bcn_id;
    out["period"] = asis.period;
    out["costs"] = costs;
    return json_response(200, out);
  }

  if (resource == "simulate" && parts.size() == 3) {
    if (req.method != "POST") return method_not_allowed();
    const auto body = parse_body(req);
    const auto asis = store_.latest_assessment(bcn_id);
    const auto actions = body.value("actions", json::array()).get<std::vector<ImprovementAction>>();
    return json_response(200, {{"bcn_id", bcn_id},
                               {"period", asis.period},
                               {"asis", asis.scores},
                               {"predicted", simulate(asis, actions)}});
  }

  fail(ErrorCode::NotFound, "no resource at '" + req.path + "'");
}

}  // namespace ratlop
