#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "wikistream/core.hpp"

using namespace wikistream;

TEST_CASE("contribution type from the OK probability") {
  CHECK(derive_contribution_type(0.9) == ContributionType::positive);
  CHECK(derive_contribution_type(0.1) == ContributionType::negative);
  CHECK(derive_contribution_type(0.5) == ContributionType::negative);
  CHECK(derive_contribution_type(std::nextafter(0.5, 1.0)) == ContributionType::positive);
  CHECK(static_cast<int>(derive_contribution_type(0.9)) == 0);
  CHECK(static_cast<int>(derive_contribution_type(0.1)) == 1);
}

TEST_CASE("contribution type rejects out-of-range input and names the field") {
  for (double bad : std::vector<double>{-0.1, 1.5, std::nan(""), INFINITY}) {
    try {
      derive_contribution_type(bad);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "art_ok");
    }
  }
}

TEST_CASE("user type encoding") {
  CHECK(derive_user_type(false) == UserType::human);
  CHECK(derive_user_type(true) == UserType::bot);
  for (bool b : {false, true}) CHECK((derive_user_type(b) == UserType::bot) == b);
}

TEST_CASE("joint class is the cross product of the two labels") {
  for (int u = 0; u < 2; ++u)
    for (int c = 0; c < 2; ++c) {
      auto j = joint_class(static_cast<UserType>(u), static_cast<ContributionType>(c));
      CHECK(static_cast<int>(j) == 2 * u + c);
      CHECK(static_cast<int>(user_of(j)) == u);
      CHECK(static_cast<int>(contribution_of(j)) == c);
      CHECK(parse_joint_class(to_string(j)) == j);
    }
  CHECK_FALSE(parse_joint_class("robot-benign").has_value());
}

TEST_CASE("every event yields exactly one joint class") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    bool bot = u(rng) < 0.5;
    double ok = u(rng);
    TargetLabels labels{derive_user_type(bot), derive_contribution_type(ok)};
    int hits = 0;
    for (int j = 0; j < 4; ++j) hits += static_cast<int>(labels.joint()) == j;
    CHECK(hits == 1);
    CHECK(labels.label(Target::user_type) == (bot ? 1 : 0));
    CHECK(labels.label(Target::contribution_type) == (ok > 0.5 ? 0 : 1));
  }
}

TEST_CASE("targets parse from their names") {
  CHECK(parse_target("user_type") == Target::user_type);
  CHECK(parse_target("contribution_type") == Target::contribution_type);
  CHECK_THROWS_AS(parse_target("joint"), ValidationError);
}

TEST_CASE("day parsing keeps only the calendar date") {
  CHECK(format_day(parse_day("2021-03-04")) == "2021-03-04");
  CHECK(parse_day("2021-03-04T23:59:59Z") == parse_day("2021-03-04"));
  CHECK(parse_day("2021-03-04 10:00") == parse_day("2021-03-04"));
  CHECK_THROWS_AS(parse_day("2021-02-30"), ValidationError);
  CHECK_THROWS_AS(parse_day("04/03/2021"), ValidationError);
  CHECK_THROWS_AS(parse_day("2021-03-04x"), ValidationError);
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double v = u(rng) / (1 + i);
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3) == "3");
}

TEST_CASE("probability groups are validated") {
  auto s = testutil::scores(0.9);
  CHECK_NOTHROW(validate(s));
  s.edit[0] = 0.7;
  s.edit[1] = 0.7;
  try {
    validate(s);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("probability group sum") != std::string::npos);
  }
  auto t = testutil::scores(0.9);
  t.wp10[0] = -0.1;
  t.wp10[1] += 0.1;
  CHECK_THROWS_AS(validate(t), ValidationError);
  auto w = testutil::scores(0.9);
  w.item[0] += 5e-7;
  CHECK_NOTHROW(validate(w));
}

TEST_CASE("renormalize restores every group to sum one") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    OresScores s;
    for (auto& v : s.edit) v = u(rng);
    for (auto& v : s.item) v = u(rng);
    for (auto& v : s.article) v = u(rng);
    for (auto& v : s.wp10) v = u(rng);
    renormalize(s);
    CHECK_NOTHROW(validate(s));
  }
  OresScores zero;
  renormalize(zero);
  CHECK(zero.wp10[3] == doctest::Approx(1.0 / 6));
}

TEST_CASE("averaging valid groups keeps them valid") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, OresScores::kColumns> mean{};
    int n = 1 + trial % 7;
    for (int k = 0; k < n; ++k) {
      OresScores s;
      for (auto& v : s.edit) v = u(rng);
      for (auto& v : s.item) v = u(rng);
      for (auto& v : s.article) v = u(rng);
      for (auto& v : s.wp10) v = u(rng);
      renormalize(s);
      auto f = s.flat();
      for (std::size_t i = 0; i < f.size(); ++i) mean[i] += f[i] / n;
    }
    CHECK_NOTHROW(validate(OresScores::from_flat(mean)));
  }
}

TEST_CASE("catalogue identifiers") {
  CHECK(kFeatureCount == 31);
  CHECK(feature_id(Feature::reviews) == "3");
  CHECK(feature_id(Feature::chars_deleted) == "14");
  CHECK(feature_id(Feature::goodfaith_true) == "15.goodfaith_true");
  CHECK(feature_id(Feature::wp10_stub) == "18.stub");
  for (auto f : all_features()) CHECK(parse_feature_id(feature_id(f)) == f);
  CHECK(parse_feature_id("#7") == Feature::revisions_per_week);
  CHECK_FALSE(parse_feature_id("19").has_value());
}

TEST_CASE("named feature sets") {
  CHECK(FeatureSet::basic().features.size() == 12);
  CHECK(FeatureSet::full().features.size() == 31);
  auto t1 = FeatureSet::user_type_selected();
  REQUIRE(t1.features.size() == 10);
  std::vector<std::string> ids;
  for (auto f : t1.features) ids.emplace_back(feature_id(f));
  CHECK(ids == std::vector<std::string>{"6", "7", "8", "9", "10", "12", "15.goodfaith_true", "16.E", "18.B",
                                        "18.stub"});
  auto t2 = FeatureSet::contribution_type_selected();
  ids.clear();
  for (auto f : t2.features) ids.emplace_back(feature_id(f));
  CHECK(ids == std::vector<std::string>{"18.B", "18.C", "18.FA", "18.start", "18.stub"});
  CHECK(FeatureSet::stacking_input().features.size() == 13);
  CHECK(FeatureSet::by_name("set1").features == FeatureSet::basic().features);
  CHECK_THROWS_AS(FeatureSet::by_name("set9"), ValidationError);
}

TEST_CASE("feature sets from identifiers are canonical and unique") {
  std::vector<std::string> ids{"18.stub", "3", "7"};
  auto s = FeatureSet::from_ids("custom", ids);
  CHECK(s.features == std::vector<Feature>{Feature::reviews, Feature::revisions_per_week, Feature::wp10_stub});
  std::vector<std::string> dup{"3", "3"};
  CHECK_THROWS_AS(FeatureSet::from_ids("d", dup), ValidationError);
  std::vector<std::string> bad{"3", "99"};
  CHECK_THROWS_AS(FeatureSet::from_ids("b", bad), ValidationError);
}

TEST_CASE("feature vectors check order, uniqueness and finiteness") {
  FeatureVector v{{Feature::reviews, Feature::pages}, {1, 2}};
  CHECK_NOTHROW(v.validate());
  CHECK(v.get(Feature::pages) == 2.0);
  CHECK_FALSE(v.get(Feature::reverts).has_value());
  FeatureVector unordered{{Feature::pages, Feature::reviews}, {1, 2}};
  CHECK_THROWS_AS(unordered.validate(), ValidationError);
  FeatureVector nonfinite{{Feature::reviews}, {std::nan("")}};
  CHECK_THROWS_AS(nonfinite.validate(), ValidationError);
}

TEST_CASE("day-level derived features") {
  auto a = testutil::aggregate("u", "2020-01-01", false, 0.9, 6, 3);
  a.reverts = 3;
  auto f = a.day_features();
  CHECK(f[index_of(Feature::revisions_per_page)] == 2.0);
  CHECK(f[index_of(Feature::revisions_per_week)] == 6.0);
  CHECK(f[index_of(Feature::pages_per_week)] == 3.0);
  CHECK(f[index_of(Feature::revert_frequency)] == 0.5);
  CHECK(f[index_of(Feature::article_ok)] == 0.9);
}
