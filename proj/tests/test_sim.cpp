#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "wikistream/analysis.hpp"
#include "wikistream/ingest.hpp"
#include "wikistream/sim.hpp"

using namespace wikistream;

namespace {

std::string events_text(const SimOutput& out) {
  std::ostringstream s;
  write_events_csv(s, out.events);
  write_labels_csv(out.contributors, s);
  return s.str();
}

}  // namespace

TEST_CASE("default population covers all four classes") {
  SimConfig config;
  auto out = simulate(config);
  CHECK(out.contributors.size() == 40);
  std::map<JointClass, std::size_t> per_class;
  for (const auto& c : out.contributors) ++per_class[c.archetype];
  CHECK(per_class.size() == 4);
  for (const auto& [cls, n] : per_class) CHECK(n == 10);

  std::set<std::string> ids;
  for (const auto& e : out.events) {
    CHECK_NOTHROW(validate(e));
    CHECK(e.day >= config.start);
    CHECK(e.day < config.start + std::chrono::days{30});
    ids.insert(e.contributor_id);
  }
  CHECK(ids.size() == 40);
  CHECK(std::is_sorted(out.events.begin(), out.events.end(), [](const auto& a, const auto& b) {
    return a.day != b.day ? a.day < b.day : a.contributor_id < b.contributor_id;
  }));
  auto summary = summarize(std::span<const EditEvent>(out.events));
  CHECK(summary.n_bots == 20);
  CHECK(summary.n_humans == 20);
  CHECK(summary.n_aggregates == 40 * 30);
}

TEST_CASE("archetypes sit on the right side of one half") {
  for (const auto& a : default_archetypes()) {
    CHECK_NOTHROW(a.validate());
    SimConfig config;
    config.counts = {0, 0, 0, 0};
    config.counts[static_cast<std::size_t>(a.joint)] = 5;
    config.span_days = 10;
    auto out = simulate(config);
    double ok = 0;
    for (const auto& e : out.events) ok += e.ores.ok() / static_cast<double>(out.events.size());
    if (a.contribution_type() == ContributionType::positive)
      CHECK(ok > 0.5);
    else
      CHECK(ok < 0.5);
  }
  auto arch = default_archetypes();
  CHECK(arch[2].edits_per_day > 10 * arch[0].edits_per_day);
}

TEST_CASE("without noise a threshold pair recovers every label") {
  SimConfig config;
  config.span_days = 15;
  config.seed = 3;
  auto out = simulate(config);
  std::map<std::string, JointClass> truth;
  for (const auto& c : out.contributors) truth[c.contributor_id] = c.archetype;
  auto aggs = aggregate_daily(out.events);

  // Oracle: one cut on daily edits for user type, one on OK for contribution type.
  std::size_t hits = 0;
  for (const auto& a : aggs) {
    bool bot = a.reviews >= 16;
    bool malign = a.ores.ok() <= 0.5;
    auto expected = truth.at(a.contributor_id);
    hits += joint_class(derive_user_type(bot), malign ? ContributionType::negative : ContributionType::positive) ==
            expected;
    CHECK(a.labels().joint() == expected);
  }
  CHECK(hits == aggs.size());

  auto x = feature_matrix(aggs, std::vector<Feature>{Feature::revisions_per_week});
  auto y = target_vector(aggs, Target::user_type);
  std::vector<double> yd(y.begin(), y.end());
  CHECK(std::abs(pearson(x.column(0), yd)) > 0.9);
}

TEST_CASE("the same seed reproduces the stream byte for byte") {
  SimConfig config;
  config.seed = 42;
  config.noise = 0.2;
  config.active_days = 10;
  auto a = events_text(simulate(config));
  auto b = events_text(simulate(config));
  CHECK(a == b);
  config.seed = 43;
  CHECK(events_text(simulate(config)) != a);
}

TEST_CASE("active days limit each contributor's calendar") {
  SimConfig config;
  config.span_days = 20;
  config.active_days = 4;
  auto aggs = aggregate_daily(simulate(config).events);
  CHECK(aggs.size() == 40 * 4);
}

TEST_CASE("configuration from file and key settings") {
  auto path = std::filesystem::temp_directory_path() / "wikistream_sim_test.conf";
  {
    std::ofstream f(path);
    f << "# population\ncounts = 1,2,3,4\nstart = 2022-05-01\nspan_days = 7\n\nseed = 9  # trailing\nnoise = 0.25\n";
  }
  auto config = SimConfig::from_file(path.string());
  CHECK(config.counts == std::array<std::size_t, 4>{1, 2, 3, 4});
  CHECK(format_day(config.start) == "2022-05-01");
  CHECK(config.span_days == 7);
  CHECK(config.seed == 9);
  CHECK(config.noise == 0.25);
  std::filesystem::remove(path);

  SimConfig c;
  c.set("bot_malign", "7");
  CHECK(c.counts[3] == 7);
  CHECK_THROWS_AS(c.set("colour", "blue"), ValidationError);
  CHECK_THROWS_AS(c.set("counts", "1,2"), ValidationError);
  CHECK_THROWS_AS(c.set("span_days", "-3"), ValidationError);
  CHECK_THROWS_AS(SimConfig::from_file("/nonexistent/sim.conf"), ValidationError);
}

TEST_CASE("invalid configurations are rejected") {
  SimConfig zero;
  zero.counts = {0, 0, 0, 0};
  CHECK_THROWS_AS(simulate(zero), ValidationError);
  SimConfig noisy;
  noisy.noise = 1.5;
  CHECK_THROWS_AS(simulate(noisy), ValidationError);
  SimConfig span;
  span.span_days = 0;
  CHECK_THROWS_AS(simulate(span), ValidationError);
  SimConfig bad_arch;
  bad_arch.archetypes[0].revert_probability = 2;
  CHECK_THROWS_AS(simulate(bad_arch), ValidationError);
}

TEST_CASE("label file lists every contributor") {
  SimConfig config;
  config.counts = {1, 1, 1, 1};
  auto out = simulate(config);
  std::ostringstream s;
  write_labels_csv(out.contributors, s);
  CHECK(s.str().rfind("contributor_id,archetype\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : s.str()) lines += c == '\n';
  CHECK(lines == 5);
}
