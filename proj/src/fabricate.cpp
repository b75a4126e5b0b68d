#include "wikistream/fabricate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "wikistream/analysis.hpp"
#include "wikistream/kernels.hpp"
#include "wikistream/random.hpp"

namespace wikistream {

namespace {

constexpr std::size_t kMaxLloydIterations = 300;

double interpolate(const std::vector<double>& sorted, double p) {
  double pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
  return d;
}

// Appends one k-means++ draw to `centroids`: a sample chosen with probability
// proportional to its squared distance from the nearest existing centroid.
void add_plus_plus_centroid(const Matrix& samples, Matrix& centroids, Rng& rng) {
  std::vector<double> d2(samples.rows());
  double total = 0;
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids.rows(); ++k) best = std::min(best, squared_distance(samples.row(i), centroids.row(k)));
    d2[i] = best;
    total += best;
  }
  std::size_t chosen = 0;
  if (total > 0) {
    std::uniform_real_distribution<double> unit(0.0, total);
    double target = unit(rng), acc = 0;
    chosen = samples.rows() - 1;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
      acc += d2[i];
      if (d2[i] > 0 && acc >= target) {
        chosen = i;
        break;
      }
    }
  }
  centroids.append_row(samples.row(chosen));
}

Matrix plus_plus_seeds(const Matrix& samples, std::size_t k, Rng& rng) {
  Matrix centroids;
  std::uniform_int_distribution<std::size_t> first(0, samples.rows() - 1);
  centroids.append_row(samples.row(first(rng)));
  while (centroids.rows() < k) add_plus_plus_centroid(samples, centroids, rng);
  return centroids;
}

KMeansModel lloyd(const Matrix& samples, Matrix centroids) {
  const std::size_t n = samples.rows(), k = centroids.rows(), d = samples.cols();
  KMeansModel model;
  model.k = k;
  std::vector<std::size_t> labels(n), previous(n, std::numeric_limits<std::size_t>::max());
  std::vector<double> dist(n);

  for (std::size_t it = 0; it < kMaxLloydIterations; ++it) {
    kernels::omp::assign_nearest(samples, centroids, labels, dist);
    model.distortion_history.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));
    model.iterations = it + 1;
    if (labels == previous) break;
    previous = labels;

    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[labels[i]];
      auto row = samples.row(i);
      for (std::size_t j = 0; j < d; ++j) sums(labels[i], j) += row[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Empty cluster: move it onto the sample worst served by its centroid.
        auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
        auto row = samples.row(far);
        std::copy(row.begin(), row.end(), centroids.row(c).begin());
        dist[far] = 0;
        ++model.reseeds;
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    }
  }

  model.centroids = std::move(centroids);
  model.assignment = std::move(labels);
  model.cluster_sizes.assign(k, 0);
  for (auto l : model.assignment) ++model.cluster_sizes[l];
  return model;
}

}  // namespace

FeatureQuartiles quartiles(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("samples", "quartiles need at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  FeatureQuartiles q;
  q.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  q.min = sorted.front();
  q.q1 = interpolate(sorted, 0.25);
  q.median = interpolate(sorted, 0.5);
  q.q3 = interpolate(sorted, 0.75);
  q.max = sorted.back();
  return q;
}

QuartileStats quartile_stats(const Matrix& samples, std::span<const Feature> features) {
  if (!features.empty() && features.size() != samples.cols())
    throw ValidationError("features", "count differs from matrix columns");
  QuartileStats stats;
  stats.features.assign(features.begin(), features.end());
  stats.sample_count = samples.rows();
  for (std::size_t c = 0; c < samples.cols(); ++c) stats.per_feature.push_back(quartiles(samples.column(c)));
  return stats;
}

double KMeansModel::mean_distance(const Matrix& samples) const {
  if (samples.rows() == 0) return 0.0;
  double total = 0;
  for (std::size_t i = 0; i < samples.rows(); ++i)
    total += std::sqrt(squared_distance(samples.row(i), centroids.row(assignment[i])));
  return total / static_cast<double>(samples.rows());
}

KMeansModel kmeans_fit(const Matrix& samples, std::size_t k, std::uint64_t seed, std::span<const Feature> features) {
  if (k < 1) throw ValidationError("k", "must be at least 1");
  if (samples.rows() < k) throw ValidationError("k", "more clusters than samples");
  Rng rng = substream(seed, 0);
  KMeansModel model = lloyd(samples, plus_plus_seeds(samples, k, rng));
  model.cluster_stats = cluster_quartile_stats(samples, model.assignment, k, features);
  return model;
}

std::vector<QuartileStats> cluster_quartile_stats(const Matrix& raw, std::span<const std::size_t> assignment,
                                                  std::size_t k, std::span<const Feature> features) {
  std::vector<Matrix> members(k);
  for (std::size_t i = 0; i < raw.rows(); ++i) members[assignment[i]].append_row(raw.row(i));
  std::vector<QuartileStats> stats;
  for (const auto& m : members) {
    if (m.rows() == 0) {
      stats.push_back(QuartileStats{{features.begin(), features.end()}, {}, 0});
      continue;
    }
    stats.push_back(quartile_stats(m, features));
  }
  return stats;
}

std::optional<std::size_t> KSelectionCurve::largest_relative_drop() const {
  std::optional<std::size_t> best;
  double best_drop = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (mean_distance[i - 1] <= 0) continue;
    double drop = (mean_distance[i - 1] - mean_distance[i]) / mean_distance[i - 1];
    if (drop > best_drop) {
      best_drop = drop;
      best = k[i];
    }
  }
  return best;
}

KSelectionCurve k_selection_curve(const Matrix& samples, std::size_t k_min, std::size_t k_max, std::uint64_t seed) {
  if (k_min < 1 || k_min > k_max || k_max > samples.rows())
    throw ValidationError("k_range", "must satisfy 1 <= k_min <= k_max <= n_samples");
  KSelectionCurve curve;
  Rng rng = substream(seed, 0);
  Matrix centroids = plus_plus_seeds(samples, k_min, rng);
  for (std::size_t k = k_min; k <= k_max; ++k) {
    if (k > k_min) add_plus_plus_centroid(samples, centroids, rng);
    KMeansModel model = lloyd(samples, centroids);
    curve.k.push_back(k);
    curve.mean_distance.push_back(model.mean_distance(samples));
    centroids = model.centroids;
  }
  return curve;
}

std::array<std::size_t, 4> interval_split(std::size_t count) noexcept {
  std::array<std::size_t, 4> split{};
  split.fill(count / 4);
  for (std::size_t i = 0; i < count % 4; ++i) ++split[i];
  return split;
}

SyntheticBatch generate_synthetic(const QuartileStats& stats, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("count", "must be at least 1");
  if (stats.per_feature.empty()) throw ValidationError("stats", "no features");
  for (const auto& q : stats.per_feature)
    if (!(q.min <= q.q1 && q.q1 <= q.median && q.median <= q.q3 && q.q3 <= q.max))
      throw ValidationError("stats", "quartiles are not monotone");

  const std::size_t p = stats.per_feature.size();
  Matrix lower(4, p), upper(4, p);
  for (std::size_t c = 0; c < p; ++c) {
    auto b = stats.per_feature[c].bounds();
    for (std::size_t iv = 0; iv < 4; ++iv) {
      lower(iv, c) = b[iv];
      upper(iv, c) = b[iv + 1];
    }
  }

  SyntheticBatch batch;
  batch.features = stats.features;
  batch.seed = seed;
  batch.interval_counts = interval_split(count);
  for (std::size_t iv = 0; iv < 4; ++iv) batch.interval.insert(batch.interval.end(), batch.interval_counts[iv], iv);
  batch.samples = Matrix(count, p);
  kernels::omp::fill_uniform(batch.samples, batch.interval, {lower, upper}, seed);
  return batch;
}

DailyAggregate materialize_synthetic(std::span<const double> row, std::string contributor_id, Day day) {
  auto at = [&](Feature f) { return std::max(0.0, row[index_of(f)]); };
  DailyAggregate a;
  a.contributor_id = std::move(contributor_id);
  a.day = day;
  a.is_bot = true;
  a.synthetic = true;
  a.reviews = std::max(1.0, std::round(at(Feature::reviews)));
  a.mean_review_length = at(Feature::mean_review_length);
  a.pages = std::clamp(std::round(at(Feature::pages)), 1.0, a.reviews);
  a.reverts = std::clamp(std::round(at(Feature::reverts)), 0.0, a.reviews);
  a.links_ratio = at(Feature::links_ratio);
  a.repeated_links_ratio = at(Feature::repeated_links_ratio);
  a.chars_inserted = at(Feature::chars_inserted);
  a.chars_deleted = at(Feature::chars_deleted);
  std::array<double, OresScores::kColumns> probs{};
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::clamp(row[kOresOffset + i], 0.0, 1.0);
  a.ores = OresScores::from_flat(probs);
  renormalize(a.ores);
  a.contribution_type = derive_contribution_type(a.ores.ok());
  return a;
}

BalanceResult balance_dataset(std::span<const DailyAggregate> real, std::uint64_t seed, std::optional<std::size_t> count) {
  BalanceResult result;
  result.n_real = real.size();

  std::map<std::string_view, bool> contributors;
  for (const auto& a : real) contributors[a.contributor_id] = contributors[a.contributor_id] || a.is_bot;
  for (const auto& [id, bot] : contributors) (bot ? result.n_bot_contributors : result.n_human_contributors) += 1;
  if (result.n_bot_contributors == 0) throw ValidationError("real", "cannot model bot class: no bot contributors");

  std::size_t gap = count.value_or(result.n_human_contributors > result.n_bot_contributors
                                       ? result.n_human_contributors - result.n_bot_contributors
                                       : 0);
  const auto& features = all_features();
  Matrix bots;
  for (const auto& a : real)
    if (a.is_bot) bots.append_row(a.day_features());
  result.bot_stats = quartile_stats(bots, features);

  if (gap == 0) {
    result.combined.assign(real.begin(), real.end());
    return result;
  }

  std::size_t k = std::min<std::size_t>(2, bots.rows());
  Matrix standardized = Standardizer::fit(bots).transform(bots);
  KMeansModel model = kmeans_fit(standardized, k, seed);
  model.cluster_stats = cluster_quartile_stats(bots, model.assignment, k, features);

  // Largest-remainder split of the gap proportional to cluster sizes.
  std::vector<std::size_t> per_cluster(k, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    double exact = static_cast<double>(gap) * static_cast<double>(model.cluster_sizes[c]) / static_cast<double>(bots.rows());
    per_cluster[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += per_cluster[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < gap; ++i, ++assigned) ++per_cluster[remainders[i % k].second];

  auto [first_day, last_day] = std::minmax_element(real.begin(), real.end(),
                                                   [](const auto& a, const auto& b) { return a.day < b.day; });
  Rng day_rng = substream(seed, 0xda7);
  std::uniform_int_distribution<long> day_offset(0, (last_day->day - first_day->day).count());

  result.combined.assign(real.begin(), real.end());
  std::size_t serial = 0;
  char id[32];
  for (std::size_t c = 0; c < k; ++c) {
    if (per_cluster[c] == 0) continue;
    SyntheticBatch batch = generate_synthetic(model.cluster_stats[c], per_cluster[c], splitmix64(seed + 1 + c));
    for (std::size_t r = 0; r < batch.samples.rows(); ++r) {
      std::snprintf(id, sizeof id, "synthetic-bot-%07zu", serial++);
      Day day = first_day->day + std::chrono::days{day_offset(day_rng)};
      result.combined.push_back(materialize_synthetic(batch.samples.row(r), id, day));
    }
    result.batches.push_back(std::move(batch));
  }
  result.n_synthetic = serial;
  result.clusters = std::move(model);
  std::stable_sort(result.combined.begin(), result.combined.end(), [](const auto& a, const auto& b) {
    if (a.day != b.day) return a.day < b.day;
    return a.contributor_id < b.contributor_id;
  });
  return result;
}

std::vector<StatChange> compare_stats(const QuartileStats& original, const QuartileStats& synthetic) {
  if (original.per_feature.size() != synthetic.per_feature.size() || original.features != synthetic.features)
    throw ValidationError("synthetic", "feature lists differ");
  std::vector<StatChange> changes;
  for (std::size_t i = 0; i < original.per_feature.size(); ++i) {
    const auto& o = original.per_feature[i];
    const auto& s = synthetic.per_feature[i];
    std::array<double, 5> ov{o.mean, o.min, o.q1, o.median, o.q3};
    std::array<double, 5> sv{s.mean, s.min, s.q1, s.median, s.q3};
    StatChange change{original.features.empty() ? Feature::reviews : original.features[i], {}};
    for (std::size_t j = 0; j < 5; ++j)
      if (ov[j] != 0.0) change.percent[j] = 100.0 * (sv[j] - ov[j]) / ov[j];
    changes.push_back(change);
  }
  return changes;
}

void write_comparison_csv(std::ostream& out, const QuartileStats& original, std::span<const StatChange> changes) {
  static constexpr std::array<const char*, 5> kNames{"mean", "min", "Q1", "Q2", "Q3"};
  out << "feature,statistic,original,change_percent\n";
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const auto& q = original.per_feature[i];
    std::array<double, 5> ov{q.mean, q.min, q.q1, q.median, q.q3};
    for (std::size_t j = 0; j < 5; ++j) {
      out << feature_id(changes[i].feature) << ',' << kNames[j] << ',' << format_number(ov[j]) << ',';
      if (changes[i].percent[j])
        out << format_number(*changes[i].percent[j]);
      else
        out << "n/a (zero base)";
      out << '\n';
    }
  }
}

}  // namespace wikistream
