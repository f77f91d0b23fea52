#include "ratlop/inputs.hpp"

#include <fstream>
#include <sstream>

#include "ratlop/errors.hpp"
#include "ratlop/serialize.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace ratlop {

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Input, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

bool is_comment(std::string_view line) { return text::trim(line).starts_with('#'); }

}  // namespace

std::vector<MaturityAssessment> parse_maturity_file(std::string_view content) {
  std::vector<MaturityAssessment> out;
  for (const auto& line : text::lines(content)) {
    if (is_comment(line.content)) continue;
    const auto f = text::fields(line.content);
    if (f.size() < 2 || f.size() > 3 || f[0].empty())
      fail(ErrorCode::Input, at_line(line.number) + "expected org_id,level[,model_id]");
    const auto level = text::to_int(f[1]);
    if (!level) fail(ErrorCode::Input, at_line(line.number) + "level '" + std::string(f[1]) + "' is not an integer");
    if (*level < 1 || *level > 5)
      fail(ErrorCode::Validation, at_line(line.number) + "maturity level of '" + std::string(f[0]) +
                                      "' must be in 1..5",
           {{"org_id", f[0]}});
    MaturityAssessment m{std::string(f[0]), static_cast<int>(*level), std::nullopt};
    if (f.size() == 3 && !f[2].empty()) m.model_id = std::string(f[2]);
    out.push_back(std::move(m));
  }
  return out;
}

CompatibilityMatrix parse_matrix_file(std::string_view content) {
  std::vector<text::Line> rows;
  for (const auto& line : text::lines(content))
    if (!is_comment(line.content)) rows.push_back(line);
  if (rows.size() != kConcernLevelCount)
    fail(ErrorCode::Input, "matrix file must have 4 rows, found " + std::to_string(rows.size()));

  CompatibilityMatrix matrix;
  for (std::size_t r = 0; r < kConcernLevelCount; ++r) {
    const auto f = text::fields(rows[r].content);
    if (f.size() != kBarrierCategoryCount)
      fail(ErrorCode::Input, at_line(rows[r].number) + "expected 6 marks, found " + std::to_string(f.size()));
    for (std::size_t c = 0; c < kBarrierCategoryCount; ++c) {
      if (f[c] == "1")
        matrix.set_marked(kConcernLevels[r], kBarrierCategories[c], true);
      else if (f[c] == "NA")
        matrix.set_not_applicable(kConcernLevels[r], kBarrierCategories[c]);
      else if (f[c] != "0")
        fail(ErrorCode::Input, at_line(rows[r].number) + "mark '" + std::string(f[c]) +
                                   "' must be 0, 1 or NA");
    }
  }
  return matrix;
}

std::map<std::pair<ConcernLevel, BarrierCategory>, std::vector<Finding>> parse_evidence_file(
    std::string_view content) {
  std::map<std::pair<ConcernLevel, BarrierCategory>, std::vector<Finding>> out;
  for (const auto& line : text::lines(content)) {
    if (is_comment(line.content)) continue;
    // row,col,status,finding -- only the first three commas separate fields.
    std::vector<std::string_view> f;
    std::string_view rest = line.content;
    for (int i = 0; i < 3; ++i) {
      const auto p = rest.find(',');
      if (p == std::string_view::npos) break;
      f.push_back(text::trim(rest.substr(0, p)));
      rest.remove_prefix(p + 1);
    }
    f.push_back(text::trim(rest));
    if (f.size() != 4 || f[3].empty())
      fail(ErrorCode::Input, at_line(line.number) + "expected row,col,status,finding");
    const auto row = text::to_int(f[0]);
    const auto col = text::to_int(f[1]);
    if (!row || !col || *row < 1 || *row > 4 || *col < 1 || *col > 6)
      fail(ErrorCode::Input, at_line(line.number) + "cell must be row 1..4, col 1..6");
    if (f[2] != "open" && f[2] != "resolved")
      fail(ErrorCode::Input, at_line(line.number) + "status must be open or resolved");
    out[{kConcernLevels[*row - 1], kBarrierCategories[*col - 1]}].push_back(
        {std::string(f[3]), f[2] == "resolved"});
  }
  return out;
}

void attach_evidence(CompatibilityMatrix& matrix,
                     const std::map<std::pair<ConcernLevel, BarrierCategory>,
                                    std::vector<Finding>>& evidence,
                     int threshold) {
  if (threshold < 1) fail(ErrorCode::Validation, "evidence threshold must be at least 1");
  nlohmann::json disagreements = nlohmann::json::array();
  for (const auto& [key, findings] : evidence) {
    auto& cell = matrix.cell(key.first, key.second);
    cell.evidence = findings;
    if (evidence_marks_cell(cell, threshold) != cell.marked)
      disagreements.push_back(std::to_string(static_cast<int>(key.first) + 1) + "," +
                              std::to_string(static_cast<int>(key.second) + 1));
  }
  if (!disagreements.empty())
    fail(ErrorCode::Validation, "evidence disagrees with the matrix marks at cells " +
                                    disagreements.dump(),
         {{"cells", disagreements}});
}

WeightConfig parse_weights(std::string_view content) {
  const auto f = text::fields(content);
  if (f.size() != 3) fail(ErrorCode::Input, "weights must be given as w1,w2,w3");
  WeightConfig w;
  double* slots[] = {&w.w_pi, &w.w_dc, &w.w_po};
  for (std::size_t i = 0; i < 3; ++i) {
    auto v = text::to_double(f[i]);
    if (!v) fail(ErrorCode::Input, "weight '" + std::string(f[i]) + "' is not a decimal");
    *slots[i] = *v;
  }
  validate_weights(w);
  return w;
}

CostModel parse_costs_document(std::string_view content) {
  const auto j = parse_document(content, "cost model");
  return decode("cost model", [&] { return j.get<CostModel>(); });
}

IndicatorInputs load_indicator_dir(const fs::path& dir, const PeriodId& period,
                                   SnapshotConfig config) {
  if (!fs::is_directory(dir)) fail(ErrorCode::Input, "'" + dir.string() + "' is not a directory");
  IndicatorInputs in;
  in.config = config;
  if (fs::exists(dir / "servers.csv"))
    in.servers = parse_server_csv(read_text_file(dir / "servers.csv"), period);
  if (fs::exists(dir / "links.csv"))
    in.links = parse_link_csv(read_text_file(dir / "links.csv"), period);
  if (fs::exists(dir / "survey.csv"))
    in.responses = parse_survey_csv(read_text_file(dir / "survey.csv"), period, config.scale_max);
  return in;
}

PeriodAssessment prepare_assessment(const BcnModel& model, const AssessmentInputs& inputs) {
  PeriodAssessment a;
  a.period = inputs.period;
  a.maturity = inputs.maturity;
  a.matrix = inputs.matrix;
  a.weights = inputs.weights;
  if (inputs.snapshot) {
    validate_snapshot(*inputs.snapshot);
    a.snapshot = *inputs.snapshot;
  } else if (inputs.indicators) {
    const auto& raw = *inputs.indicators;
    auto built = build_snapshot(raw.servers, raw.links, raw.responses, raw.config);
    a.snapshot = built.snapshot;
    a.provenance = built.provenance;
  } else {
    fail(ErrorCode::Validation, "operational indicators are missing");
  }
  a.scores = assess(model, a.maturity, a.matrix, a.snapshot, a.weights);
  return a;
}

}  // namespace ratlop
