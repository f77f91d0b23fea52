#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "helpers.hpp"
#include "ratlop/errors.hpp"
#include "ratlop/inputs.hpp"

using namespace ratlop;
using doctest::Approx;

namespace {

void write(const std::filesystem::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Validation;
}

}  // namespace

TEST_CASE("maturity file") {
  const auto m = parse_maturity_file("# org,level\nA,3,LISI\n\nB, 4\r\n");
  REQUIRE(m.size() == 2);
  CHECK(m[0].org_id == "A");
  CHECK(m[0].imml == 3);
  CHECK(m[0].model_id == "LISI");
  CHECK(m[1].imml == 4);
  CHECK_FALSE(m[1].model_id);

  CHECK(code_of([] { parse_maturity_file("A,three\n"); }) == ErrorCode::Input);
  CHECK(code_of([] { parse_maturity_file("A\n"); }) == ErrorCode::Input);
  CHECK_THROWS_AS(parse_maturity_file("A,6\n"), Error);
}

TEST_CASE("matrix file") {
  const auto m = parse_matrix_file(
      "1,0,0,0,0,0\n"
      "0,1,0,0,0,0\n"
      "0,0,0,0,0,NA\n"
      "1,1,1,1,1,1\n");
  CHECK(m.marked_count() == 8);
  CHECK(m.marked(ConcernLevel::Business, BarrierCategory::ConceptualSyntactic));
  CHECK(m.marked(ConcernLevel::Process, BarrierCategory::ConceptualSemantic));
  CHECK(m.cell(ConcernLevel::Service, BarrierCategory::TechCommunication).not_applicable);
  CHECK(compute_compatibility(m) == Approx(16.0 / 24.0));

  CHECK(code_of([] { parse_matrix_file("0,0,0,0,0,0\n"); }) == ErrorCode::Input);
  CHECK(code_of([] {
          parse_matrix_file("0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n");
        }) == ErrorCode::Input);
  CHECK(code_of([] {
          parse_matrix_file("2,0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n0,0,0,0,0,0\n");
        }) == ErrorCode::Input);
}

TEST_CASE("evidence") {
  const auto evidence = parse_evidence_file(
      "1,1,open,codes differ, units differ\n"
      "1,1,resolved,date formats\n"
      "2,3,resolved,unowned process\n");
  const auto key = std::pair{ConcernLevel::Business, BarrierCategory::ConceptualSyntactic};
  REQUIRE(evidence.count(key) == 1);
  CHECK(evidence.at(key).size() == 2);
  CHECK(evidence.at(key)[0].text == "codes differ, units differ");
  CHECK_FALSE(evidence.at(key)[0].resolved);

  SUBCASE("consistent marks") {
    auto m = testing::matrix_with_marks(1);
    attach_evidence(m, evidence, 1);
    CHECK(m.cell(key.first, key.second).evidence.size() == 2);
    CHECK(m.marked_count() == 1);
  }
  SUBCASE("marks that disagree with the evidence") {
    CompatibilityMatrix m;
    CHECK(code_of([&] { attach_evidence(m, evidence, 1); }) == ErrorCode::Validation);
  }
  SUBCASE("a higher threshold unmarks") {
    CompatibilityMatrix m;
    CHECK_NOTHROW(attach_evidence(m, evidence, 2));
  }
  CHECK(code_of([] { parse_evidence_file("5,1,open,x\n"); }) == ErrorCode::Input);
  CHECK(code_of([] { parse_evidence_file("1,1,pending,x\n"); }) == ErrorCode::Input);
}

TEST_CASE("weights and costs") {
  const auto w = parse_weights("2,1,0.5");
  CHECK(w.w_pi == 2.0);
  CHECK(w.w_dc == 1.0);
  CHECK(w.w_po == 0.5);
  CHECK(code_of([] { parse_weights("1,1"); }) == ErrorCode::Input);
  CHECK_THROWS_AS(parse_weights("0,0,0"), Error);
  CHECK_THROWS_AS(parse_weights("-1,1,1"), Error);

  const auto c = parse_costs_document(
      R"({"cost_per_maturity_level": 8, "cost_per_cell": {"technical": 3}, "indicator_step": 0.1})");
  CHECK(c.cost_per_maturity_level == 8.0);
  CHECK(c.cost_technical_cell == 3.0);
  CHECK(c.cost_conceptual_cell == 1.0);
  CHECK(c.cost_per_indicator_step == 0.5);
  CHECK(c.indicator_step == 0.1);
  CHECK(code_of([] { parse_costs_document("{"); }) == ErrorCode::Input);
}

TEST_CASE("indicator directory and assessment pipeline") {
  testing::TempDir dir;
  write(dir.path() / "servers.csv", "id,availability\nS1,0.9\nS2,0.7\n");
  write(dir.path() / "links.csv", "id,availability\nL1,0.6\n");
  write(dir.path() / "survey.csv", "respondent,rating\nr1,5\nr2,3\n");
  const auto period = canonical_period("2010-Q1");

  auto raw = load_indicator_dir(dir.path(), period, {});
  CHECK(raw.servers.size() == 2);
  CHECK(raw.links.size() == 1);
  CHECK(raw.responses.size() == 2);

  AssessmentInputs in;
  in.period = period;
  in.maturity = {{"A", 3, std::nullopt}, {"B", 4, std::nullopt}};
  in.matrix = testing::matrix_with_marks(6);
  in.indicators = raw;
  const auto a = prepare_assessment(testing::two_org_model(), in);
  CHECK(a.snapshot.ds == Approx(0.8));
  CHECK(a.snapshot.qos == Approx(0.6));
  CHECK(a.snapshot.ts == Approx(0.75));
  REQUIRE(a.provenance);
  CHECK(a.provenance->ds == IndicatorSource::Computed);
  CHECK(a.scores.pi == Approx(0.6));
  CHECK(a.scores.dc == 0.75);
  CHECK(a.scores.po == Approx(std::cbrt(0.8 * 0.6 * 0.75)));

  SUBCASE("overrides win and are recorded") {
    in.indicators->config.ds_override = 0.5;
    const auto b = prepare_assessment(testing::two_org_model(), in);
    CHECK(b.snapshot.ds == 0.5);
    CHECK(b.provenance->ds == IndicatorSource::Overridden);
  }
  SUBCASE("a ready snapshot wins over raw data") {
    in.snapshot = PerformanceSnapshot{1, 1, 1};
    const auto b = prepare_assessment(testing::two_org_model(), in);
    CHECK(b.scores.po == 1.0);
    CHECK_FALSE(b.provenance);
  }
  SUBCASE("missing indicators") {
    in.indicators.reset();
    CHECK(code_of([&] { prepare_assessment(testing::two_org_model(), in); }) ==
          ErrorCode::Validation);
  }
  SUBCASE("a missing file needs an override") {
    std::filesystem::remove(dir.path() / "links.csv");
    auto partial = load_indicator_dir(dir.path(), period, {});
    CHECK(partial.links.empty());
    in.indicators = partial;
    CHECK_THROWS_AS(prepare_assessment(testing::two_org_model(), in), Error);
  }
  CHECK(code_of([&] { load_indicator_dir(dir.path() / "absent", period, {}); }) ==
        ErrorCode::Input);
  CHECK(code_of([&] { read_text_file(dir.path() / "absent.csv"); }) != ErrorCode::Validation);
}

TEST_CASE("command-line exit codes") {
  testing::TempDir dir;
  const std::string cli = std::string("'") + RATLOP_CLI + "' --store '" +
                          (dir.path() / "store").string() + "' ";
  const std::string fixture = std::string(RATLOP_FIXTURE_DIR) + "/public_finance/";
  auto run = [](const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(run(cli + "validate '" + fixture + "model.json'") == 0);
  CHECK(run(cli + "init '" + fixture + "model.json'") == 0);
  CHECK(run(cli + "trend public_finance") == 1);
  CHECK(run(cli + "validate '" + fixture + "absent.json'") == 2);
  CHECK(run(cli + "plan public_finance") == 2);
  write(dir.path() / "bad.csv", "treasury,x\n");
  CHECK(run(cli + "assess public_finance 2010-Q1 --maturity '" + (dir.path() / "bad.csv").string() +
            "' --matrix '" + fixture + "2010-Q1/matrix.csv' --ds 1 --qos 1 --ts 1") == 2);
  CHECK(run(cli + "assess public_finance 2010-Q1 --maturity '" + fixture +
            "2010-Q1/maturity.csv' --matrix '" + fixture +
            "2010-Q1/matrix.csv' --indicators '" + fixture + "2010-Q1/indicators'") == 0);
  CHECK(run(cli + "plan public_finance --target 1.5") == 1);
  CHECK(run(cli + "plan public_finance --target 0.9 --json '" +
            (dir.path() / "scenario.json").string() + "'") == 0);
  CHECK(std::filesystem::exists(dir.path() / "scenario.json"));
}
