#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracle.hpp"
#include "ratlop/errors.hpp"
#include "ratlop/scoring.hpp"

using namespace ratlop;
using doctest::Approx;

namespace {

std::vector<MaturityAssessment> levels(std::initializer_list<std::pair<const char*, int>> items) {
  std::vector<MaturityAssessment> out;
  for (auto [org, level] : items) out.push_back({org, level, std::nullopt});
  return out;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Input;
}

}  // namespace

TEST_CASE("quantify_potentiality reproduces the maturity table") {
  CHECK(quantify_potentiality(1) == 0.2);
  CHECK(quantify_potentiality(2) == 0.4);
  CHECK(quantify_potentiality(3) == 0.6);
  CHECK(quantify_potentiality(4) == 0.8);
  CHECK(quantify_potentiality(5) == 1.0);
  CHECK(code_of([] { quantify_potentiality(0); }) == ErrorCode::Validation);
  CHECK(code_of([] { quantify_potentiality(6); }) == ErrorCode::Validation);
}

TEST_CASE("aggregate_potentiality takes the minimum") {
  auto r = aggregate_potentiality(levels({{"A", 3}, {"B", 4}}));
  CHECK(r.pi == 0.6);
  CHECK(r.per_org.at("A") == 0.6);
  CHECK(r.per_org.at("B") == 0.8);
  CHECK(aggregate_potentiality(levels({{"A", 4}})).pi == 0.8);
  CHECK(aggregate_potentiality(levels({{"A", 5}, {"B", 5}, {"C", 5}})).pi == 1.0);
  CHECK(code_of([] { aggregate_potentiality({}); }) == ErrorCode::Validation);
  CHECK(code_of([] { aggregate_potentiality(levels({{"A", 3}, {"A", 4}})); }) ==
        ErrorCode::Validation);
}

TEST_CASE("compute_compatibility") {
  CHECK(compute_compatibility(testing::matrix_with_marks(0)) == 1.0);
  CHECK(compute_compatibility(testing::matrix_with_marks(24)) == 0.0);
  CHECK(compute_compatibility(testing::matrix_with_marks(6)) == 0.75);
  for (int m = 0; m <= 24; ++m) {
    const double dc = compute_compatibility(testing::matrix_with_marks(m));
    CHECK(dc * 24 == static_cast<double>(24 - m));
  }
}

TEST_CASE("not-applicable cells score as compatible over a fixed denominator") {
  auto m = testing::matrix_with_marks(6);
  m.set_not_applicable(ConcernLevel::Data, BarrierCategory::TechPlatform);
  CHECK(compute_compatibility(m) == 0.75);
  CHECK_THROWS_AS(m.set_marked(ConcernLevel::Data, BarrierCategory::TechPlatform, true), Error);
}

TEST_CASE("cells derive from evidence with a threshold") {
  std::map<std::pair<ConcernLevel, BarrierCategory>, std::vector<Finding>> evidence;
  evidence[{ConcernLevel::Business, BarrierCategory::ConceptualSemantic}] = {
      {"glossaries differ", false}};
  evidence[{ConcernLevel::Process, BarrierCategory::TechPlatform}] = {{"old ETL", true}};
  evidence[{ConcernLevel::Data, BarrierCategory::ConceptualSyntactic}] = {{"xml vs csv", false},
                                                                          {"encodings", false}};
  auto t1 = CompatibilityMatrix::from_evidence(evidence, 1);
  CHECK(t1.marked_count() == 2);
  CHECK(t1.marked(ConcernLevel::Business, BarrierCategory::ConceptualSemantic));
  CHECK_FALSE(t1.marked(ConcernLevel::Process, BarrierCategory::TechPlatform));
  auto t2 = CompatibilityMatrix::from_evidence(evidence, 2);
  CHECK(t2.marked_count() == 1);
  CHECK(t2.marked(ConcernLevel::Data, BarrierCategory::ConceptualSyntactic));
}

TEST_CASE("compute_performance is the geometric mean") {
  CHECK(compute_performance({1, 1, 1}) == 1.0);
  // cbrt(0.504) = 0.795811441579278371... (30-digit reference)
  CHECK(compute_performance({0.9, 0.8, 0.7}) == Approx(0.7958114415792784).epsilon(1e-15));
  CHECK(compute_performance({0.5, 0.0, 0.9}) == 0.0);
  CHECK(code_of([] { compute_performance({1.1, 1, 1}); }) == ErrorCode::Validation);
}

TEST_CASE("compute_ratlop") {
  CHECK(compute_ratlop(1, 1, 1) == 1.0);
  CHECK(compute_ratlop(0.6, 0.75, 0.7958114415792784) == Approx(0.7152704805264262).epsilon(1e-12));
  CHECK(compute_ratlop(0.6, 0.75, 0.8, {2, 1, 1}) == Approx(0.6875).epsilon(1e-15));
  CHECK(code_of([] { compute_ratlop(0.5, 0.5, 0.5, {0, 0, 0}); }) == ErrorCode::Validation);
  CHECK(code_of([] { compute_ratlop(0.5, 0.5, 0.5, {-1, 1, 1}); }) == ErrorCode::Validation);
}

TEST_CASE("assess composes the steps") {
  auto model = testing::two_org_model();

  SUBCASE("all perfect") {
    auto s = assess(model, levels({{"A", 5}, {"B", 5}}), {}, {1, 1, 1}, {});
    CHECK(s.ratlop == 1.0);
  }
  SUBCASE("all worst") {
    auto s = assess(model, levels({{"A", 1}, {"B", 1}}), testing::matrix_with_marks(24), {0, 0, 0}, {});
    CHECK(s.ratlop == Approx(0.2 / 3).epsilon(1e-12));
  }
  SUBCASE("case-study shaped input") {
    model.organizations = {{"treasury", "", testing::five_level_model("EIMM")},
                           {"customs", "", testing::five_level_model("EIMM")},
                           {"tax", "", testing::five_level_model("EIMM")}};
    auto s = assess(model, levels({{"treasury", 3}, {"customs", 4}, {"tax", 4}}),
                    testing::matrix_with_marks(6), {0.9, 0.8, 0.7}, {});
    CHECK(s.pi == 0.6);
    CHECK(s.dc == 0.75);
    CHECK(s.ratlop == Approx(0.7152704805264262).epsilon(1e-12));
    CHECK(round_export(s.ratlop) == 0.71527);
  }
  SUBCASE("organization coverage is enforced") {
    CHECK(code_of([&] { assess(model, levels({{"A", 5}}), {}, {1, 1, 1}, {}); }) ==
          ErrorCode::Validation);
    CHECK(code_of([&] {
            assess(model, levels({{"A", 5}, {"B", 5}, {"C", 5}}), {}, {1, 1, 1}, {});
          }) == ErrorCode::Validation);
  }
}

TEST_CASE("round_export is half-even at 6 decimals") {
  CHECK(round_export(0.7152704805264262) == 0.71527);
  CHECK(round_export(0.25) == 0.25);
  CHECK(round_export(1.0) == 1.0);
}

TEST_CASE("scoring properties over random inputs") {
  std::mt19937 rng(20101);
  std::uniform_int_distribution<int> level(1, 5);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.01, 5.0);

  for (int trial = 0; trial < 300; ++trial) {
    oracle::Inputs in;
    std::vector<MaturityAssessment> maturity;
    const int orgs = 1 + trial % 4;
    for (int k = 0; k < orgs; ++k) {
      in.levels.push_back(level(rng));
      maturity.push_back({"org" + std::to_string(k), in.levels.back(), std::nullopt});
    }
    CompatibilityMatrix matrix;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) {
        in.dc[i][j] = bit(rng);
        matrix.set_marked(kConcernLevels[i], kBarrierCategories[j], in.dc[i][j] == 1);
      }
    in.ds = frac(rng);
    in.qos = frac(rng);
    in.ts = frac(rng);
    in.w1 = weight(rng);
    in.w2 = weight(rng);
    in.w3 = weight(rng);
    const WeightConfig w{in.w1, in.w2, in.w3};
    const auto s = assess_inputs(maturity, matrix, {in.ds, in.qos, in.ts}, w);
    const auto o = oracle::evaluate(in);

    CHECK(std::fabs(s.pi - o.pi) <= 1e-9);
    CHECK(std::fabs(s.dc - o.dc) <= 1e-9);
    CHECK(std::fabs(s.po - o.po) <= 1e-9);
    CHECK(std::fabs(s.ratlop - o.ratlop) <= 1e-9);
    for (double v : {s.pi, s.dc, s.po, s.ratlop}) CHECK((v >= 0.0 && v <= 1.0));

    // Equal-weight consistency and scale invariance.
    CHECK(std::fabs(compute_ratlop(s.pi, s.dc, s.po, {1, 1, 1}) - (s.pi + s.dc + s.po) / 3) <= 1e-12);
    const double c = weight(rng);
    CHECK(std::fabs(compute_ratlop(s.pi, s.dc, s.po, {c * w.w_pi, c * w.w_dc, c * w.w_po}) -
                    s.ratlop) <= 1e-12);

    // DC quantization.
    const double scaled = s.dc * 24;
    CHECK(scaled == std::round(scaled));
  }
}
