#include <doctest.h>

#include <algorithm>
#include <random>

#include "ratlop/errors.hpp"
#include "ratlop/survey.hpp"

using namespace ratlop;
using doctest::Approx;

namespace {

const PeriodId kQ1{"2010-Q1", 8040};

std::vector<SurveyResponse> ratings(std::initializer_list<int> values, PeriodId period = kQ1) {
  std::vector<SurveyResponse> out;
  int i = 0;
  for (int v : values) out.push_back({"r" + std::to_string(i++), v, period});
  return out;
}

}  // namespace

TEST_CASE("normalize_rating") {
  CHECK(normalize_rating(1, 5) == 0.0);
  CHECK(normalize_rating(5, 5) == 1.0);
  CHECK(normalize_rating(3, 5) == 0.5);
  CHECK(normalize_rating(4, 10) == Approx(1.0 / 3));
  try {
    normalize_rating(6, 5, "alice");
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("alice") != std::string::npos);
    CHECK(e.details().at("respondent_id") == "alice");
  }
  CHECK_THROWS_AS(normalize_rating(1, 1), Error);
}

TEST_CASE("compute_ts") {
  CHECK(compute_ts(ratings({5, 5, 5}), 5) == 1.0);
  CHECK(compute_ts(ratings({1, 5}), 5) == 0.5);
  CHECK(compute_ts(ratings({3, 4, 5}), 5) == 0.75);
  CHECK_THROWS_AS(compute_ts({}, 5), Error);
  auto mixed = ratings({3, 4});
  mixed[1].period = {"2010-Q2", 8041};
  CHECK_THROWS_AS(compute_ts(mixed, 5), Error);
}

TEST_CASE("aggregate_availability") {
  const std::vector<double> same{0.9, 0.9};
  const std::vector<double> spread{1.0, 0.8};
  CHECK(aggregate_availability(same) == Approx(0.9));
  CHECK(aggregate_availability(spread, AggregationMode::Mean) == Approx(0.9));
  CHECK(aggregate_availability(spread, AggregationMode::Min) == 0.8);
  CHECK_THROWS_AS(aggregate_availability(std::vector<double>{}), Error);
  CHECK_THROWS_AS(aggregate_availability(std::vector<double>{1.2}), Error);
}

TEST_CASE("survey properties") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> rating(1, 7);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SurveyResponse> responses;
    const int n = 1 + trial % 9;
    for (int i = 0; i < n; ++i) responses.push_back({"r" + std::to_string(i), rating(rng), kQ1});
    const double ts = compute_ts(responses, 7);
    auto shuffled = responses;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(compute_ts(shuffled, 7) == Approx(ts).epsilon(1e-12));
    auto [lo, hi] = std::minmax_element(responses.begin(), responses.end(),
                                        [](auto& a, auto& b) { return a.rating < b.rating; });
    CHECK(ts >= normalize_rating(lo->rating, 7) - 1e-12);
    CHECK(ts <= normalize_rating(hi->rating, 7) + 1e-12);

    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(frac(rng));
    CHECK(aggregate_availability(values, AggregationMode::Min) <=
          aggregate_availability(values, AggregationMode::Mean) + 1e-15);
  }
}

TEST_CASE("build_snapshot") {
  const std::vector<ServerAvailability> servers{{"srv", 0.9, kQ1}};
  const std::vector<LinkAvailability> links{{"lnk", 0.8, kQ1}};
  const auto responses = ratings({3, 4});

  SUBCASE("unit data") {
    const std::vector<ServerAvailability> s{{"srv", 1.0, kQ1}};
    const std::vector<LinkAvailability> l{{"lnk", 1.0, kQ1}};
    auto r = build_snapshot(s, l, ratings({5}), {});
    CHECK(r.snapshot == PerformanceSnapshot{1, 1, 1});
  }
  SUBCASE("computed values and provenance") {
    auto r = build_snapshot(servers, links, responses, {});
    CHECK(r.snapshot.ds == 0.9);
    CHECK(r.snapshot.qos == 0.8);
    CHECK(r.snapshot.ts == 0.625);
    CHECK(r.provenance.ds == IndicatorSource::Computed);
    CHECK(r.provenance.availability_mode == AggregationMode::Mean);
  }
  SUBCASE("overrides pass through") {
    SnapshotConfig config;
    config.ds_override = 0.9;
    config.qos_override = 0.8;
    config.ts_override = 0.7;
    auto r = build_snapshot({}, {}, {}, config);
    CHECK(r.snapshot == PerformanceSnapshot{0.9, 0.8, 0.7});
    CHECK(r.provenance.ts == IndicatorSource::Overridden);
  }
  SUBCASE("missing indicator names it") {
    try {
      build_snapshot(servers, {}, responses, {});
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.details().at("indicator") == "QoS");
    }
  }
}

TEST_CASE("CSV import") {
  SUBCASE("well-formed files") {
    auto s = parse_server_csv("id,availability\nsrv1,0.99\r\nsrv2,1\n\n", kQ1);
    REQUIRE(s.size() == 2);
    CHECK(s[0].server_id == "srv1");
    CHECK(s[0].availability == 0.99);
    CHECK(s[1].period == kQ1);
    auto r = parse_survey_csv("respondent,rating\nu1,4\nu2,5\n", kQ1, 5);
    CHECK(r.size() == 2);
    CHECK(r[1].rating == 5);
  }
  SUBCASE("one bad row rejects the whole file with line numbers") {
    try {
      parse_link_csv("id,availability\nl1,0.9\nl2,1,5\nl3,1.5\nl4,0,95\n", kQ1);
      FAIL("expected rejection");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Input);
      const auto& rows = e.details().at("rows");
      REQUIRE(rows.size() == 3);
      CHECK(rows[0].at("line") == 3);
      CHECK(rows[1].at("line") == 4);
      CHECK(rows[2].at("line") == 5);
    }
  }
  SUBCASE("thousands separators and decimal commas are rejected") {
    CHECK_THROWS_AS(parse_server_csv("id,availability\ns,\"0,9\"\n", kQ1), Error);
    CHECK_THROWS_AS(parse_server_csv("id,availability\ns,1e-1\n", kQ1), Error);
  }
  SUBCASE("wrong header") {
    CHECK_THROWS_AS(parse_survey_csv("id,rating\nu1,4\n", kQ1, 5), Error);
    CHECK_THROWS_AS(parse_server_csv("", kQ1), Error);
  }
  SUBCASE("out-of-scale rating names the respondent") {
    try {
      parse_survey_csv("respondent,rating\nbob,9\n", kQ1, 5);
      FAIL("expected rejection");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("bob") != std::string::npos);
    }
  }
}
