#include "ratlop/serialize.hpp"

#include "ratlop/errors.hpp"

namespace ratlop {

namespace {

std::string cell_key(std::size_t row, std::size_t col) {
  return std::to_string(row + 1) + "," + std::to_string(col + 1);
}

std::pair<std::size_t, std::size_t> parse_cell_key(const std::string& key) {
  const auto comma = key.find(',');
  std::size_t row = 0, col = 0;
  try {
    if (comma == std::string::npos) throw std::invalid_argument(key);
    row = std::stoul(key.substr(0, comma));
    col = std::stoul(key.substr(comma + 1));
  } catch (const std::logic_error&) {
    fail(ErrorCode::Input, "matrix cell key '" + key + "' is not of the form row,col");
  }
  if (row < 1 || row > kConcernLevelCount || col < 1 || col > kBarrierCategoryCount)
    fail(ErrorCode::Input, "matrix cell key '" + key + "' is out of range");
  return {row - 1, col - 1};
}

json optional_string(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

std::optional<std::string> read_optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

template <typename Enum>
Enum parse_enum(const json& j, std::optional<Enum> (*parse)(std::string_view), const char* what) {
  const auto text = j.get<std::string>();
  auto value = parse(text);
  if (!value) fail(ErrorCode::Input, std::string("unknown ") + what + " '" + text + "'");
  return *value;
}

void require_format(const json& j, std::string_view format) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != format)
    fail(ErrorCode::Input, "document is not a '" + std::string(format) + "' document");
}

}  // namespace

void to_json(json& j, const PeriodId& p) { j = {{"label", p.label}, {"ordinal", p.ordinal}}; }

void from_json(const json& j, PeriodId& p) {
  p = canonical_period(j.at("label").get<std::string>(), j.at("ordinal").get<std::int64_t>());
}

void to_json(json& j, const MaturityAssessment& m) {
  j = {{"org_id", m.org_id}, {"imml", m.imml}, {"model_id", optional_string(m.model_id)}};
}

void from_json(const json& j, MaturityAssessment& m) {
  m.org_id = j.at("org_id").get<std::string>();
  m.imml = j.at("imml").get<int>();
  m.model_id = read_optional_string(j, "model_id");
}

void to_json(json& j, const CompatibilityMatrix& m) {
  json cells = json::array();
  json not_applicable = json::array();
  json evidence = json::object();
  for (std::size_t r = 0; r < kConcernLevelCount; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < kBarrierCategoryCount; ++c) {
      const auto& cell = m.cell(kConcernLevels[r], kBarrierCategories[c]);
      row.push_back(cell.marked ? 1 : 0);
      if (cell.not_applicable) not_applicable.push_back(cell_key(r, c));
      if (!cell.evidence.empty()) {
        json findings = json::array();
        for (const auto& f : cell.evidence)
          findings.push_back({{"text", f.text}, {"resolved", f.resolved}});
        evidence[cell_key(r, c)] = std::move(findings);
      }
    }
    cells.push_back(std::move(row));
  }
  j = {{"cells", cells}, {"not_applicable", not_applicable}, {"evidence", evidence}};
}

void from_json(const json& j, CompatibilityMatrix& m) {
  const auto& cells = j.at("cells");
  if (!cells.is_array() || cells.size() != kConcernLevelCount)
    fail(ErrorCode::Input, "matrix must have 4 rows");
  std::array<std::array<int, kBarrierCategoryCount>, kConcernLevelCount> marks{};
  for (std::size_t r = 0; r < kConcernLevelCount; ++r) {
    if (!cells[r].is_array() || cells[r].size() != kBarrierCategoryCount)
      fail(ErrorCode::Input, "matrix row " + std::to_string(r + 1) + " must have 6 cells");
    for (std::size_t c = 0; c < kBarrierCategoryCount; ++c) marks[r][c] = cells[r][c].get<int>();
  }
  m = CompatibilityMatrix::from_marks(marks);
  if (j.contains("not_applicable")) {
    for (const auto& key : j.at("not_applicable")) {
      auto [r, c] = parse_cell_key(key.get<std::string>());
      if (marks[r][c])
        fail(ErrorCode::Input, "cell " + key.get<std::string>() + " is both marked and not applicable");
      m.set_not_applicable(kConcernLevels[r], kBarrierCategories[c]);
    }
  }
  if (j.contains("evidence")) {
    for (const auto& [key, findings] : j.at("evidence").items()) {
      auto [r, c] = parse_cell_key(key);
      auto& cell = m.cell(kConcernLevels[r], kBarrierCategories[c]);
      for (const auto& f : findings)
        cell.evidence.push_back({f.at("text").get<std::string>(), f.value("resolved", false)});
    }
  }
}

void to_json(json& j, const PerformanceSnapshot& s) {
  j = {{"ds", s.ds}, {"qos", s.qos}, {"ts", s.ts}};
}

void from_json(const json& j, PerformanceSnapshot& s) {
  s.ds = j.at("ds").get<double>();
  s.qos = j.at("qos").get<double>();
  s.ts = j.at("ts").get<double>();
  validate_snapshot(s);
}

void to_json(json& j, const SnapshotProvenance& p) {
  j = {{"ds", to_string(p.ds)},
       {"qos", to_string(p.qos)},
       {"ts", to_string(p.ts)},
       {"availability_mode", to_string(p.availability_mode)},
       {"scale_max", p.scale_max}};
}

void from_json(const json& j, SnapshotProvenance& p) {
  p.ds = parse_enum(j.at("ds"), &parse_indicator_source, "indicator source");
  p.qos = parse_enum(j.at("qos"), &parse_indicator_source, "indicator source");
  p.ts = parse_enum(j.at("ts"), &parse_indicator_source, "indicator source");
  p.availability_mode = parse_enum(j.at("availability_mode"), &parse_aggregation_mode,
                                   "aggregation mode");
  p.scale_max = j.at("scale_max").get<int>();
}

void to_json(json& j, const WeightConfig& w) {
  j = {{"w_pi", w.w_pi}, {"w_dc", w.w_dc}, {"w_po", w.w_po}};
}

void from_json(const json& j, WeightConfig& w) {
  w.w_pi = j.at("w_pi").get<double>();
  w.w_dc = j.at("w_dc").get<double>();
  w.w_po = j.at("w_po").get<double>();
  validate_weights(w);
}

void to_json(json& j, const ScoreBreakdown& s) {
  j = {{"pi", s.pi},
       {"dc", s.dc},
       {"po", s.po},
       {"ratlop", s.ratlop},
       {"weights", s.weights},
       {"per_org_pi", s.per_org_pi}};
}

void from_json(const json& j, ScoreBreakdown& s) {
  s.pi = j.at("pi").get<double>();
  s.dc = j.at("dc").get<double>();
  s.po = j.at("po").get<double>();
  s.ratlop = j.at("ratlop").get<double>();
  s.weights = j.at("weights").get<WeightConfig>();
  s.per_org_pi = j.at("per_org_pi").get<std::map<std::string, double>>();
}

void to_json(json& j, const Trend& t) {
  j = {{"periods", t.periods}, {"ratlop", t.ratlop}, {"pi", t.pi},
       {"dc", t.dc},           {"po", t.po},         {"deltas", t.deltas}};
}

void to_json(json& j, const CostModel& c) {
  j = {{"cost_per_maturity_level", c.cost_per_maturity_level},
       {"cost_per_cell",
        {{"conceptual", c.cost_conceptual_cell},
         {"organizational", c.cost_organizational_cell},
         {"technical", c.cost_technical_cell}}},
       {"cost_per_indicator_step", c.cost_per_indicator_step},
       {"indicator_step", c.indicator_step}};
}

void from_json(const json& j, CostModel& c) {
  // Every key is optional: missing entries keep their defaults.
  c = CostModel{};
  c.cost_per_maturity_level = j.value("cost_per_maturity_level", c.cost_per_maturity_level);
  if (j.contains("cost_per_cell")) {
    const auto& cell = j.at("cost_per_cell");
    c.cost_conceptual_cell = cell.value("conceptual", c.cost_conceptual_cell);
    c.cost_organizational_cell = cell.value("organizational", c.cost_organizational_cell);
    c.cost_technical_cell = cell.value("technical", c.cost_technical_cell);
  }
  c.cost_per_indicator_step = j.value("cost_per_indicator_step", c.cost_per_indicator_step);
  c.indicator_step = j.value("indicator_step", c.indicator_step);
  validate_costs(c);
}

void to_json(json& j, const ImprovementAction& a) {
  std::visit(
      [&](const auto& act) {
        using T = std::decay_t<decltype(act)>;
        if constexpr (std::is_same_v<T, RaiseMaturity>) {
          j = {{"kind", "raise_maturity"}, {"org_id", act.org_id}, {"to_level", act.to_level}};
        } else if constexpr (std::is_same_v<T, ResolveCell>) {
          j = {{"kind", "resolve_cell"},
               {"level", to_string(act.level)},
               {"barrier", to_string(act.barrier)}};
        } else {
          j = {{"kind", "improve_indicator"},
               {"indicator", to_string(act.which)},
               {"to_value", act.to_value}};
        }
      },
      a);
}

void from_json(const json& j, ImprovementAction& a) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "raise_maturity") {
    a = RaiseMaturity{j.at("org_id").get<std::string>(), j.at("to_level").get<int>()};
  } else if (kind == "resolve_cell") {
    a = ResolveCell{parse_enum(j.at("level"), &parse_concern_level, "concern level"),
                    parse_enum(j.at("barrier"), &parse_barrier_category, "barrier category")};
  } else if (kind == "improve_indicator") {
    a = ImproveIndicator{parse_enum(j.at("indicator"), &parse_indicator, "indicator"),
                         j.at("to_value").get<double>()};
  } else {
    fail(ErrorCode::Input, "unknown action kind '" + kind + "'");
  }
}

void to_json(json& j, const Violation& v) {
  j = {{"subject", v.subject}, {"rule", v.rule}, {"message", v.message}};
}

json bcn_to_json(const BcnModel& model) {
  json orgs = json::array();
  for (const auto& o : model.organizations) {
    const auto& mm = o.maturity_model;
    orgs.push_back({{"org_id", o.org_id},
                    {"name", o.name},
                    {"maturity_model",
                     {{"model_id", mm.model_id},
                      {"level_count", mm.level_count},
                      {"level_names", mm.level_names},
                      {"level_prerequisites", mm.level_prerequisites}}}});
  }
  json processes = json::array();
  for (const auto& p : model.processes) {
    processes.push_back({{"process_id", p.process_id},
                         {"owner_org", p.owner_org},
                         {"kind", p.kind == ProcessKind::Composite ? "composite" : "elementary"},
                         {"children", p.children}});
  }
  json services = json::array();
  for (const auto& s : model.services) {
    services.push_back({{"service_id", s.service_id},
                        {"provider_process", s.provider_process},
                        {"name", s.name}});
  }
  json connections = json::array();
  for (const auto& c : model.connections) {
    connections.push_back({{"connection_id", c.connection_id},
                           {"from_process", c.from_process},
                           {"to_process", c.to_process},
                           {"via_service", optional_string(c.via_service)}});
  }
  return {{"format", kBcnFormat},     {"bcn_id", model.bcn_id},
          {"organizations", orgs},    {"processes", processes},
          {"services", services},     {"connections", connections},
          {"focus_process", model.focus_process}};
}

BcnModel bcn_from_json(const json& j) {
  return decode("BCN document", [&] {
    require_format(j, kBcnFormat);
    BcnModel model;
    model.bcn_id = j.at("bcn_id").get<std::string>();
    for (const auto& o : j.at("organizations")) {
      Organization org;
      org.org_id = o.at("org_id").get<std::string>();
      org.name = o.value("name", std::string{});
      const auto& mm = o.at("maturity_model");
      org.maturity_model.model_id = mm.at("model_id").get<std::string>();
      org.maturity_model.level_count = mm.value("level_count", 5);
      org.maturity_model.level_names =
          mm.value("level_names", std::vector<std::string>{});
      org.maturity_model.level_prerequisites =
          mm.value("level_prerequisites", std::vector<std::vector<std::string>>{});
      model.organizations.push_back(std::move(org));
    }
    for (const auto& p : j.at("processes")) {
      BusinessProcess process;
      process.process_id = p.at("process_id").get<std::string>();
      process.owner_org = p.at("owner_org").get<std::string>();
      const auto kind = p.at("kind").get<std::string>();
      if (kind == "composite")
        process.kind = ProcessKind::Composite;
      else if (kind == "elementary")
        process.kind = ProcessKind::Elementary;
      else
        fail(ErrorCode::Input, "unknown process kind '" + kind + "'");
      process.children = p.value("children", std::vector<std::string>{});
      model.processes.push_back(std::move(process));
    }
    for (const auto& s : j.at("services")) {
      model.services.push_back({s.at("service_id").get<std::string>(),
                                s.at("provider_process").get<std::string>(),
                                s.value("name", std::string{})});
    }
    for (const auto& c : j.at("connections")) {
      model.connections.push_back({c.at("connection_id").get<std::string>(),
                                   c.at("from_process").get<std::string>(),
                                   c.at("to_process").get<std::string>(),
                                   read_optional_string(c, "via_service")});
    }
    model.focus_process = j.at("focus_process").get<std::string>();
    return model;
  });
}

json assessment_to_json(const std::string& bcn_id, const PeriodAssessment& a) {
  return {{"format", kAssessmentFormat},
          {"bcn_id", bcn_id},
          {"period", a.period},
          {"revision", a.revision},
          {"recorded_at", a.recorded_at},
          {"maturity", a.maturity},
          {"matrix", a.matrix},
          {"snapshot", a.snapshot},
          {"provenance", a.provenance ? json(*a.provenance) : json(nullptr)},
          {"weights", a.weights},
          {"scores", a.scores}};
}

PeriodAssessment assessment_from_json(const json& j) {
  return decode("assessment document", [&] {
    require_format(j, kAssessmentFormat);
    PeriodAssessment a;
    a.period = j.at("period").get<PeriodId>();
    a.revision = j.at("revision").get<int>();
    a.recorded_at = j.at("recorded_at").get<std::string>();
    a.maturity = j.at("maturity").get<std::vector<MaturityAssessment>>();
    a.matrix = j.at("matrix").get<CompatibilityMatrix>();
    a.snapshot = j.at("snapshot").get<PerformanceSnapshot>();
    if (j.contains("provenance") && !j.at("provenance").is_null())
      a.provenance = j.at("provenance").get<SnapshotProvenance>();
    a.weights = j.at("weights").get<WeightConfig>();
    a.scores = j.at("scores").get<ScoreBreakdown>();
    return a;
  });
}

json scenario_to_json(const Scenario& s) {
  json actions = json::array();
  for (const auto& pa : s.actions) {
    json a = pa.action;
    a["cost"] = pa.cost;
    actions.push_back(std::move(a));
  }
  return {{"format", kScenarioFormat}, {"target", s.target},
          {"actions", actions},        {"total_cost", s.total_cost},
          {"asis", s.asis},            {"predicted", s.predicted},
          {"optimal", s.optimal}};
}

std::string dump_document(const json& j) { return j.dump(2) + "\n"; }

json parse_document(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Input, "cannot parse " + std::string(what) + ": " + e.what(),
         {{"byte", e.byte}});
  }
}

BcnModel parse_bcn_document(std::string_view text) {
  return bcn_from_json(parse_document(text, "BCN document"));
}

}  // namespace ratlop
