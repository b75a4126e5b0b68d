#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "wikistream/fabricate.hpp"

using namespace wikistream;

namespace {

Matrix points(std::initializer_list<std::pair<double, double>> xy) {
  Matrix m;
  for (auto [x, y] : xy) {
    std::array<double, 2> row{x, y};
    m.append_row(row);
  }
  return m;
}

double within_cluster_ss(const Matrix& m, const std::vector<std::size_t>& labels, std::size_t k) {
  double total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> mean(m.cols(), 0.0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (labels[i] == c) {
        ++n;
        for (std::size_t j = 0; j < m.cols(); ++j) mean[j] += m(i, j);
      }
    if (n == 0) continue;
    for (auto& v : mean) v /= static_cast<double>(n);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (labels[i] == c)
        for (std::size_t j = 0; j < m.cols(); ++j) total += (m(i, j) - mean[j]) * (m(i, j) - mean[j]);
  }
  return total;
}

Matrix blobs(std::mt19937& rng, std::size_t per_blob) {
  std::normal_distribution<double> z(0, 0.3);
  Matrix m;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 0; i < per_blob; ++i) {
      std::array<double, 3> row{b * 50.0 + z(rng), z(rng), -(b * 50.0) + z(rng)};
      m.append_row(row);
    }
  return m;
}

// Order-statistic interpolation at position (n-1)p.
double quantile_oracle(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  double pos = (static_cast<double>(v.size()) - 1) * p;
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<DailyAggregate> population(std::size_t humans, std::size_t bots, std::uint64_t seed) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<DailyAggregate> out;
  for (std::size_t i = 0; i < humans; ++i)
    out.push_back(testutil::aggregate("h" + std::to_string(i), "2021-01-0" + std::to_string(1 + i % 5), false,
                                      0.1 + 0.8 * u(rng), 1 + std::floor(5 * u(rng)), 1));
  for (std::size_t i = 0; i < bots; ++i) {
    auto a = testutil::aggregate("b" + std::to_string(i), "2021-01-0" + std::to_string(1 + i % 3), true,
                                 0.1 + 0.8 * u(rng), 20 + std::floor(40 * u(rng)), 5);
    a.chars_inserted = 1000 * u(rng);
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("k-means finds the optimal 2-partition of four points") {
  auto m = points({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
  auto model = kmeans_fit(m, 2, 1);
  // Exhaustive oracle over all 2-partitions.
  double best = INFINITY;
  std::vector<std::size_t> best_labels;
  for (unsigned mask = 1; mask < 15; ++mask) {
    std::vector<std::size_t> labels(4);
    for (std::size_t i = 0; i < 4; ++i) labels[i] = (mask >> i) & 1u;
    double ss = within_cluster_ss(m, labels, 2);
    if (ss < best) {
      best = ss;
      best_labels = labels;
    }
  }
  CHECK(within_cluster_ss(m, model.assignment, 2) == doctest::Approx(best));
  CHECK(model.assignment[0] == model.assignment[1]);
  CHECK(model.assignment[2] == model.assignment[3]);
  CHECK(model.assignment[0] != model.assignment[2]);
  CHECK(model.cluster_sizes == std::vector<std::size_t>{2, 2});
}

TEST_CASE("k-means limiting cases") {
  std::mt19937 rng(4);
  auto m = blobs(rng, 20);
  auto one = kmeans_fit(m, 1, 0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto col = m.column(j);
    double mean = 0;
    for (double v : col) mean += v / static_cast<double>(col.size());
    CHECK(one.centroids(0, j) == doctest::Approx(mean));
  }
  auto all = kmeans_fit(m, m.rows(), 0);
  CHECK(all.distortion_history.back() == doctest::Approx(0.0));
  CHECK(all.mean_distance(m) == doctest::Approx(0.0));
  CHECK_THROWS_AS(kmeans_fit(m, 0, 0), ValidationError);
  CHECK_THROWS_AS(kmeans_fit(m, m.rows() + 1, 0), ValidationError);
}

TEST_CASE("k-means assigns every sample to its nearest centroid and distortion never rises") {
  std::mt19937 rng(9);
  std::normal_distribution<double> z(0, 1);
  for (std::size_t trial = 0; trial < 20; ++trial) {
    Matrix m(60 + trial, 3);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = z(rng) + (i % 3) * 2.0;
    auto model = kmeans_fit(m, 1 + trial % 5, trial);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double own = 0;
      for (std::size_t j = 0; j < 3; ++j) own += std::pow(m(i, j) - model.centroids(model.assignment[i], j), 2);
      for (std::size_t c = 0; c < model.k; ++c) {
        double d = 0;
        for (std::size_t j = 0; j < 3; ++j) d += std::pow(m(i, j) - model.centroids(c, j), 2);
        CHECK(own <= d + 1e-12);
      }
    }
    for (std::size_t i = 1; i < model.distortion_history.size(); ++i)
      CHECK(model.distortion_history[i] <= model.distortion_history[i - 1] + 1e-9);
    for (double v : model.centroids.data()) CHECK(std::isfinite(v));
  }
}

TEST_CASE("K selection curve") {
  std::mt19937 rng(2);
  auto m = blobs(rng, 30);
  auto curve = k_selection_curve(m, 1, 8, 5);
  REQUIRE(curve.k.size() == 8);
  for (std::size_t i = 1; i < curve.mean_distance.size(); ++i)
    CHECK(curve.mean_distance[i] <= curve.mean_distance[i - 1] + 1e-12);
  CHECK(curve.largest_relative_drop() == 2);

  // K=1 on centered data: mean norm of the centered points.
  Matrix centered = m;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double mean = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, j) / static_cast<double>(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) centered(i, j) -= mean;
  }
  double mean_norm = 0;
  for (std::size_t i = 0; i < centered.rows(); ++i) {
    double s = 0;
    for (double v : centered.row(i)) s += v * v;
    mean_norm += std::sqrt(s) / static_cast<double>(centered.rows());
  }
  CHECK(k_selection_curve(centered, 1, 1, 0).mean_distance[0] == doctest::Approx(mean_norm));

  auto small = points({{0, 0}, {1, 0}, {5, 5}});
  CHECK(k_selection_curve(small, 3, 3, 0).mean_distance[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(k_selection_curve(small, 2, 4, 0), ValidationError);
}

TEST_CASE("quartile examples") {
  std::vector<double> v{5, 3, 1, 4, 2};
  auto q = quartiles(v);
  CHECK(q.min == 1);
  CHECK(q.q1 == 2);
  CHECK(q.median == 3);
  CHECK(q.q3 == 4);
  CHECK(q.max == 5);
  CHECK(q.mean == 3);
  std::vector<double> flat(6, 2.5), single{7};
  CHECK(quartiles(flat).bounds() == std::array<double, 5>{2.5, 2.5, 2.5, 2.5, 2.5});
  CHECK(quartiles(single).bounds() == std::array<double, 5>{7, 7, 7, 7, 7});
  CHECK(quartiles(single).degenerate());
  CHECK_THROWS_AS(quartiles(std::vector<double>{}), ValidationError);
}

TEST_CASE("quartiles match the interpolation oracle and stay ordered") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = testutil::gaussian_vector(rng, 1 + trial, 0, 1 + trial);
    auto q = quartiles(v);
    CHECK(q.q1 == doctest::Approx(quantile_oracle(v, 0.25)));
    CHECK(q.median == doctest::Approx(quantile_oracle(v, 0.5)));
    CHECK(q.q3 == doctest::Approx(quantile_oracle(v, 0.75)));
    CHECK(q.min <= q.q1);
    CHECK(q.q1 <= q.median);
    CHECK(q.median <= q.q3);
    CHECK(q.q3 <= q.max);
  }
}

TEST_CASE("interval split") {
  CHECK(interval_split(46532) == std::array<std::size_t, 4>{11633, 11633, 11633, 11633});
  CHECK(interval_split(5) == std::array<std::size_t, 4>{2, 1, 1, 1});
  CHECK(interval_split(7) == std::array<std::size_t, 4>{2, 2, 2, 1});
  for (std::size_t n = 0; n < 50; ++n) {
    auto s = interval_split(n);
    CHECK(s[0] + s[1] + s[2] + s[3] == n);
  }
}

TEST_CASE("synthetic draws stay inside their source range and are reproducible") {
  std::mt19937 rng(31);
  std::vector<Feature> features{Feature::reviews, Feature::pages, Feature::chars_inserted};
  for (int trial = 0; trial < 10; ++trial) {
    Matrix src(50, 3);
    for (std::size_t i = 0; i < 50; ++i)
      for (std::size_t j = 0; j < 3; ++j) src(i, j) = std::exp(std::normal_distribution<double>(j, 1)(rng));
    for (std::size_t i = 0; i < 50; ++i) src(i, 1) = 4;  // degenerate column
    auto stats = quartile_stats(src, features);
    std::size_t count = 37 + 101 * static_cast<std::size_t>(trial);
    auto batch = generate_synthetic(stats, count, trial);
    REQUIRE(batch.samples.rows() == count);
    CHECK(batch.interval_counts == interval_split(count));
    for (std::size_t r = 0; r < count; ++r) {
      for (std::size_t j = 0; j < 3; ++j) {
        const auto& q = stats.per_feature[j];
        auto b = q.bounds();
        double v = batch.samples(r, j);
        CHECK(v >= q.min);
        CHECK(v <= q.max);
        CHECK(v >= b[batch.interval[r]]);
        CHECK(v <= b[batch.interval[r] + 1]);
      }
      CHECK(batch.samples(r, 1) == 4);
    }
    auto again = generate_synthetic(stats, count, trial);
    CHECK(again.samples == batch.samples);
    CHECK(again.interval == batch.interval);
  }
}

TEST_CASE("large synthetic batches reproduce the source quartiles") {
  std::mt19937 rng(77);
  std::vector<Feature> features{Feature::reviews, Feature::chars_deleted};
  Matrix src(400, 2);
  for (std::size_t i = 0; i < 400; ++i) {
    src(i, 0) = 1 + std::floor(std::exp(std::normal_distribution<double>(3, 0.5)(rng)));
    src(i, 1) = std::exp(std::normal_distribution<double>(5, 1)(rng));
  }
  auto stats = quartile_stats(src, features);
  auto batch = generate_synthetic(stats, 20000, 3);
  auto synth = quartile_stats(batch.samples, features);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& o = stats.per_feature[j];
    const auto& s = synth.per_feature[j];
    CHECK(std::abs(s.q1 - o.q1) / o.q1 <= 0.02);
    CHECK(std::abs(s.median - o.median) / o.median <= 0.02);
    CHECK(std::abs(s.q3 - o.q3) / o.q3 <= 0.02);
  }
}

TEST_CASE("synthetic generation rejects bad inputs") {
  QuartileStats bad;
  bad.features = {Feature::reviews};
  bad.per_feature = {FeatureQuartiles{0, 0, 3, 2, 4, 5}};
  CHECK_THROWS_AS(generate_synthetic(bad, 10, 0), ValidationError);
  bad.per_feature = {FeatureQuartiles{0, 0, 1, 2, 4, 5}};
  CHECK_THROWS_AS(generate_synthetic(bad, 0, 0), ValidationError);
}

TEST_CASE("materialized synthetic rows satisfy the aggregate contract") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, kFeatureCount> row{};
    for (auto& v : row) v = u(rng);
    row[index_of(Feature::reviews)] = 0.2;
    auto a = materialize_synthetic(row, "s", parse_day("2021-01-01"));
    CHECK(a.is_bot);
    CHECK(a.synthetic);
    CHECK(a.reviews >= 1);
    CHECK(a.pages >= 1);
    CHECK(a.pages <= a.reviews);
    CHECK(a.reverts >= 0);
    CHECK(a.reverts <= a.reviews);
    CHECK(a.reviews == std::round(a.reviews));
    CHECK_NOTHROW(validate(a.ores));
    CHECK(a.contribution_type == derive_contribution_type(a.ores.ok()));
  }
}

TEST_CASE("balancing fills the contributor gap") {
  auto real = population(10, 4, 1);
  auto result = balance_dataset(real, 7);
  CHECK(result.n_human_contributors == 10);
  CHECK(result.n_bot_contributors == 4);
  CHECK(result.n_synthetic == 6);
  CHECK(result.combined.size() == real.size() + 6);
  REQUIRE(result.clusters.has_value());
  CHECK(result.clusters->k == 2);
  std::size_t synthetic = 0;
  for (const auto& a : result.combined) {
    if (!a.synthetic) continue;
    ++synthetic;
    CHECK(a.is_bot);
    CHECK(a.day >= parse_day("2021-01-01"));
    CHECK(a.day <= parse_day("2021-01-05"));
  }
  CHECK(synthetic == 6);
  CHECK(std::is_sorted(result.combined.begin(), result.combined.end(), [](const auto& a, const auto& b) {
    return a.day != b.day ? a.day < b.day : a.contributor_id < b.contributor_id;
  }));

  auto again = balance_dataset(real, 7);
  REQUIRE(again.combined.size() == result.combined.size());
  for (std::size_t i = 0; i < again.combined.size(); ++i)
    CHECK(again.combined[i].day_features() == result.combined[i].day_features());

  auto forced = balance_dataset(real, 7, 11);
  CHECK(forced.n_synthetic == 11);
}

TEST_CASE("balanced input is returned unchanged") {
  auto real = population(5, 5, 2);
  auto result = balance_dataset(real, 1);
  CHECK(result.n_synthetic == 0);
  CHECK_FALSE(result.clusters.has_value());
  REQUIRE(result.combined.size() == real.size());
  for (std::size_t i = 0; i < real.size(); ++i) CHECK(result.combined[i].contributor_id == real[i].contributor_id);
}

TEST_CASE("balancing without bots fails") {
  auto real = population(5, 0, 3);
  try {
    balance_dataset(real, 0);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("cannot model bot class") != std::string::npos);
  }
}

TEST_CASE("relative change report") {
  QuartileStats o, s;
  o.features = s.features = {Feature::reverts, Feature::reviews};
  o.per_feature = {FeatureQuartiles{1, 0, 1, 2, 3, 4}, FeatureQuartiles{0, 0, 0, 0, 0, 0}};
  s.per_feature = {FeatureQuartiles{1, 0, 1, 1.5, 3, 4}, FeatureQuartiles{1, 1, 1, 1, 1, 1}};
  auto changes = compare_stats(o, s);
  REQUIRE(changes.size() == 2);
  CHECK(changes[0].percent[0] == 0.0);
  CHECK_FALSE(changes[0].percent[1].has_value());
  CHECK(*changes[0].percent[3] == doctest::Approx(-25.0));
  for (const auto& p : changes[1].percent) CHECK_FALSE(p.has_value());
  auto same = compare_stats(o, o);
  for (const auto& c : same)
    for (const auto& p : c.percent)
      if (p) CHECK(*p == 0.0);
  std::ostringstream out;
  write_comparison_csv(out, o, changes);
  CHECK(out.str().find("n/a") != std::string::npos);
  QuartileStats other = s;
  other.features = {Feature::reviews, Feature::reverts};
  CHECK_THROWS_AS(compare_stats(o, other), ValidationError);
}
