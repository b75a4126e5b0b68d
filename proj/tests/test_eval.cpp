#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "wikistream/eval.hpp"
#include "wikistream/ingest.hpp"
#include "wikistream/naive_bayes.hpp"
#include "wikistream/sim.hpp"

using namespace wikistream;

namespace {

std::vector<DailyAggregate> small_stream(std::uint64_t seed, double noise = 0.1) {
  SimConfig config;
  config.counts = {8, 8, 4, 4};
  config.span_days = 20;
  config.active_days = 8;
  config.seed = seed;
  config.noise = noise;
  auto sim = simulate(config);
  return aggregate_daily(sim.events);
}

bool same_log(const std::vector<PredictionRecord>& a, const std::vector<PredictionRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].index != b[i].index || a[i].contributor_id != b[i].contributor_id || a[i].day != b[i].day ||
        a[i].truth != b[i].truth || a[i].predicted != b[i].predicted || a[i].probabilities != b[i].probabilities)
      return false;
  return true;
}

// Reference F-measure straight from the definitions.
double f_oracle(const std::vector<std::vector<std::uint64_t>>& m, std::size_t c) {
  double tp = m[c][c], fp = 0, fn = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k == c) continue;
    fp += m[k][c];
    fn += m[c][k];
  }
  double p = tp + fp > 0 ? tp / (tp + fp) : 0;
  double r = tp + fn > 0 ? tp / (tp + fn) : 0;
  return p + r > 0 ? 2 * p * r / (p + r) : 0;
}

}  // namespace

TEST_CASE("confusion matrix basics") {
  ConfusionMatrix cm;
  cm.add(0, 0);
  cm.add(0, 1);
  cm.add(1, 1);
  CHECK(cm.total() == 3);
  CHECK(cm.correct() == 2);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.accuracy() == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(cm.add(2, 0), ValidationError);
  CHECK_THROWS_AS(cm.add(0, -1), ValidationError);
  CHECK(ConfusionMatrix().accuracy() == 0);
  CHECK_THROWS_AS(ConfusionMatrix::from_rows({{1, 2}, {3}}), ValidationError);
}

TEST_CASE("symmetric confusion gives one half everywhere") {
  auto cm = ConfusionMatrix::from_rows({{1, 1}, {1, 1}});
  CHECK(f_measure(cm, 0) == doctest::Approx(0.5));
  CHECK(f_measure(cm, 1) == doctest::Approx(0.5));
  auto mm = macro_micro(cm);
  CHECK(mm.macro == doctest::Approx(0.5));
  CHECK(mm.micro == doctest::Approx(0.5));
}

TEST_CASE("majority-only predictions") {
  auto cm = ConfusionMatrix::from_rows({{98, 0}, {2, 0}});
  CHECK(f_measure(cm, 1) == 0.0);
  CHECK(f_measure(cm, 0) == doctest::Approx(2 * 0.98 / 1.98));
  auto mm = macro_micro(cm);
  CHECK(mm.macro == doctest::Approx(0.98 / 1.98));
  CHECK(mm.micro == doctest::Approx(0.98));
}

TEST_CASE("a constant predictor on a balanced stream scores one half") {
  ConfusionMatrix cm;
  for (int i = 0; i < 100; ++i) cm.add(i % 2, 0);
  CHECK(cm.accuracy() == 0.5);
  auto m = metrics_from(cm);
  CHECK(m.per_class[0].recall == 1.0);
  CHECK(m.per_class[1].f == 0.0);
}

TEST_CASE("metrics agree with the definitions on random matrices") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> count(0, 30);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + trial % 3;
    std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(n));
    for (auto& r : rows)
      for (auto& v : r) v = count(rng);
    auto cm = ConfusionMatrix::from_rows(rows);
    auto m = metrics_from(cm);
    double macro = 0;
    for (std::size_t c = 0; c < n; ++c) {
      CHECK(m.per_class[c].f == doctest::Approx(f_oracle(rows, c)));
      macro += f_oracle(rows, c) / static_cast<double>(n);
    }
    CHECK(m.macro_f == doctest::Approx(macro));
    if (cm.total() > 0) CHECK(m.micro_f == doctest::Approx(m.accuracy));
    for (double v : {m.accuracy, m.macro_f, m.micro_f}) {
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
  }
}

TEST_CASE("incremental metrics equal batch metrics over the log") {
  auto stream = small_stream(1);
  for (const char* id : {"nb", "dt", "rf"}) {
    ProfileStore profiles;
    auto clf = make_classifier(id, 0);
    auto result = prequential_run(stream, profiles, *clf, FeatureSet::full(), Target::contribution_type);
    auto batch = metrics_from_log(result.log, 2);
    CHECK(result.report.cumulative.confusion == batch.confusion);
    CHECK(result.report.cumulative.macro_f == batch.macro_f);
    CHECK(result.report.cumulative.confusion.total() == stream.size());
    CHECK(result.report.n_events == stream.size());
    CHECK(result.report.final_window_start == stream.size() - stream.size() / 5);
  }
}

TEST_CASE("prediction precedes learning") {
  // Every contributor's first aggregate is predicted by a model that has never seen that label.
  std::vector<DailyAggregate> stream{testutil::aggregate("a", "2021-01-01", true, 0.9),
                                     testutil::aggregate("b", "2021-01-02", true, 0.9)};
  ProfileStore profiles;
  GaussianNaiveBayes nb;
  auto result = prequential_run(stream, profiles, nb, FeatureSet::basic(), Target::user_type);
  REQUIRE(result.log.size() == 2);
  CHECK(result.log[0].probabilities == std::vector<double>{0.5, 0.5});
  CHECK(result.log[1].predicted == 1);
}

TEST_CASE("prequential logs are deterministic") {
  auto stream = small_stream(2);
  for (const char* id : {"rf", "bc", "stacking"}) {
    auto set = std::string(id) == "stacking" ? FeatureSet::stacking_input() : FeatureSet::full();
    ProfileStore p1, p2;
    auto c1 = make_classifier(id, 4), c2 = make_classifier(id, 4);
    auto r1 = prequential_run(stream, p1, *c1, set, Target::contribution_type);
    auto r2 = prequential_run(stream, p2, *c2, set, Target::contribution_type);
    CHECK(same_log(r1.log, r2.log));
    std::ostringstream a, b;
    write_series_csv(r1.report, a);
    write_series_csv(r2.report, b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("grid runs equal serial runs") {
  auto stream = small_stream(3);
  std::vector<GridJob> jobs;
  for (const char* id : {"nb", "dt", "rf", "bc"})
    for (auto target : {Target::user_type, Target::contribution_type})
      jobs.push_back({id, FeatureSet::basic(), target, 7});
  jobs.push_back({"stacking", FeatureSet::stacking_input(), Target::contribution_type, 7});
  auto parallel = run_grid(stream, jobs, 4);
  REQUIRE(parallel.size() == jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    ProfileStore profiles;
    auto clf = make_classifier(jobs[i].classifier, jobs[i].seed);
    auto serial = prequential_run(stream, profiles, *clf, jobs[i].features, jobs[i].target);
    CHECK(parallel[i].report.classifier == jobs[i].classifier);
    CHECK(same_log(parallel[i].log, serial.log));
    CHECK(parallel[i].report.cumulative.confusion == serial.report.cumulative.confusion);
  }
}

TEST_CASE("sliding-window series") {
  std::vector<PredictionRecord> log;
  for (std::size_t i = 0; i < 25; ++i) log.push_back({i, "c", {}, 0, i < 10 ? 0 : 1, {}, 0});
  auto s = window_series(log, 2, 10, 5);
  std::vector<std::size_t> ends;
  for (const auto& p : s) ends.push_back(p.end);
  CHECK(ends == std::vector<std::size_t>{10, 15, 20, 25});
  CHECK(s[0].accuracy == 1.0);
  CHECK(s[1].accuracy == 0.5);
  CHECK(s[2].accuracy == 0.0);
  auto short_log = window_series(std::vector<PredictionRecord>(log.begin(), log.begin() + 4), 2, 10, 0);
  REQUIRE(short_log.size() == 1);
  CHECK(short_log[0].end == 4);
  CHECK_THROWS_AS(window_series(log, 2, 0, 0), ValidationError);
  CHECK(window_series({}, 2, 10, 0).empty());
}

TEST_CASE("invalid runs are rejected") {
  auto stream = small_stream(4);
  ProfileStore profiles;
  auto stacking = make_classifier("stacking", 0);
  CHECK_THROWS_AS(prequential_run(stream, profiles, *stacking, FeatureSet::full(), Target::user_type),
                  ValidationError);
  GaussianNaiveBayes three(3);
  CHECK_THROWS_AS(prequential_run(stream, profiles, three, FeatureSet::full(), Target::user_type),
                  ValidationError);
  CHECK_THROWS_AS(make_classifier("svm", 0), ValidationError);
  CHECK(is_classifier_id("bc"));
  CHECK_FALSE(is_classifier_id("svm"));
}

TEST_CASE("report writers") {
  auto stream = small_stream(5);
  ProfileStore profiles;
  auto clf = make_classifier("dt", 0);
  auto r = prequential_run(stream, profiles, *clf, FeatureSet::basic(), Target::user_type, {.window = 50});
  std::ostringstream log_csv, json, table;
  write_prediction_log_csv(r.log, class_names(Target::user_type), log_csv);
  auto header = log_csv.str().substr(0, log_csv.str().find('\n'));
  CHECK(header == "index,contributor_id,day,true,predicted,p_human,p_bot,latency_us");
  std::size_t lines = 0;
  for (char c : log_csv.str()) lines += c == '\n';
  CHECK(lines == stream.size() + 1);
  write_report_json({r.report}, json);
  auto parsed = nlohmann::json::parse(json.str());
  CHECK(parsed["schema_version"] == 1);
  CHECK(parsed["runs"].size() == 1);
  CHECK(parsed["runs"][0].contains("timing"));
  write_report_table({r.report}, table);
  CHECK(table.str().find("Macro-F") != std::string::npos);
  CHECK(table.str().find("dt") != std::string::npos);
}
