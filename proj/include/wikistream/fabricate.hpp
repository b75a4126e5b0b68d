#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wikistream/core.hpp"
#include "wikistream/matrix.hpp"

namespace wikistream {

struct FeatureQuartiles {
  double mean = 0;
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;

  /// Interval boundaries {min, Q1, median, Q3, max}.
  std::array<double, 5> bounds() const noexcept { return {min, q1, median, q3, max}; }
  bool degenerate() const noexcept { return min == max; }
};

/// Quartiles by linear interpolation between order statistics (position
/// (n-1)p). Throws ValidationError on empty input.
FeatureQuartiles quartiles(std::span<const double> samples);

struct QuartileStats {
  std::vector<Feature> features;
  std::vector<FeatureQuartiles> per_feature;
  std::size_t sample_count = 0;
};

/// Column-wise quartiles of `samples` (rows = samples, columns = `features`).
QuartileStats quartile_stats(const Matrix& samples, std::span<const Feature> features);

struct KMeansModel {
  std::size_t k = 0;
  Matrix centroids;
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> distortion_history;  // sum of squared distances after each assignment step
  std::size_t iterations = 0;
  std::size_t reseeds = 0;                 // empty clusters moved to the farthest sample
  std::vector<QuartileStats> cluster_stats;

  double mean_distance(const Matrix& samples) const;
};

/// Lloyd's algorithm with k-means++ seeding; stops when assignments are stable
/// or after 300 iterations. Empty clusters are re-seeded at the sample
/// farthest from its centroid. `features` labels the columns for cluster_stats
/// (may be empty, in which case stats are still computed and left unlabelled).
KMeansModel kmeans_fit(const Matrix& samples, std::size_t k, std::uint64_t seed,
                       std::span<const Feature> features = {});

/// Quartile stats per cluster, computed on `raw` rows grouped by `assignment`.
std::vector<QuartileStats> cluster_quartile_stats(const Matrix& raw, std::span<const std::size_t> assignment,
                                                  std::size_t k, std::span<const Feature> features);

struct KSelectionCurve {
  std::vector<std::size_t> k;
  std::vector<double> mean_distance;

  /// K with the largest relative drop from K-1 (first K in the range excluded).
  std::optional<std::size_t> largest_relative_drop() const;
};

/// Mean sample-to-centroid distance per K over [k_min, k_max]. Each K is
/// warm-started from the previous centroids plus one k-means++ draw.
KSelectionCurve k_selection_curve(const Matrix& samples, std::size_t k_min, std::size_t k_max, std::uint64_t seed);

struct SyntheticBatch {
  std::vector<Feature> features;
  Matrix samples;                          // count x features
  std::vector<std::size_t> interval;       // interval index per row (0..3)
  std::array<std::size_t, 4> interval_counts{};
  std::uint64_t seed = 0;
};

/// Per-interval sample counts: floor(count/4) each, remainder to the first intervals.
std::array<std::size_t, 4> interval_split(std::size_t count) noexcept;

/// Quartile-interval generation: each sample picks one of the four intervals
/// [min,Q1], [Q1,median], [median,Q3], [Q3,max] per the split above, then
/// draws every feature uniformly within that feature's bounds.
SyntheticBatch generate_synthetic(const QuartileStats& stats, std::size_t count, std::uint64_t seed);

struct BalanceResult {
  std::vector<DailyAggregate> combined;   // sorted by day then contributor id
  std::size_t n_real = 0;
  std::size_t n_synthetic = 0;
  std::size_t n_human_contributors = 0;
  std::size_t n_bot_contributors = 0;
  std::optional<KMeansModel> clusters;    // absent when nothing was generated
  std::vector<SyntheticBatch> batches;    // one per cluster
  QuartileStats bot_stats;                // all real bot aggregates
};

/// Fills the human/bot contributor gap with synthetic bot contributors.
/// `count` overrides the gap when given.
BalanceResult balance_dataset(std::span<const DailyAggregate> real, std::uint64_t seed,
                              std::optional<std::size_t> count = std::nullopt);

/// Turns one synthetic row (full catalogue, canonical order) into a daily
/// aggregate: counts rounded (#3 >= 1, #5 in [1,#3], #9 in [0,#3]),
/// probability groups renormalized, label derived from the OK probability.
DailyAggregate materialize_synthetic(std::span<const double> row, std::string contributor_id, Day day);

struct StatChange {
  Feature feature;
  std::array<std::optional<double>, 5> percent;  // mean, min, Q1, Q2, Q3; nullopt = zero base
};

/// 100 * (synthetic - original) / original per feature and statistic.
std::vector<StatChange> compare_stats(const QuartileStats& original, const QuartileStats& synthetic);
void write_comparison_csv(std::ostream& out, const QuartileStats& original, std::span<const StatChange> changes);

}  // namespace wikistream
