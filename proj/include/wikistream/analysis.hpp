#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wikistream/core.hpp"
#include "wikistream/matrix.hpp"

namespace wikistream {

/// Pearson correlation coefficient. Throws ValidationError on length mismatch,
/// fewer than two samples, or a constant vector.
double pearson(std::span<const double> x, std::span<const double> y);

/// Day-level catalogue columns of each aggregate, one row per aggregate.
Matrix feature_matrix(std::span<const DailyAggregate> aggregates, std::span<const Feature> features);
std::vector<int> target_vector(std::span<const DailyAggregate> aggregates, Target target);

struct CorrelationEntry {
  Feature feature;
  double r;
  bool reported;  // |r| > threshold
};

struct CorrelationReport {
  Target target = Target::user_type;
  double threshold = 0.15;
  std::vector<CorrelationEntry> entries;  // every non-constant feature, canonical order
  std::vector<Feature> undefined;         // constant features
  std::vector<Feature> features;          // row/column order of feature_matrix
  Matrix feature_matrix;                  // feature x feature r, NaN where undefined

  std::vector<CorrelationEntry> reported() const;
};

CorrelationReport correlation_report(std::span<const DailyAggregate> aggregates, Target target,
                                     double threshold = 0.15);

/// Column z-scoring; constant columns become all zeros.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 0 for constant columns

  static Standardizer fit(const Matrix& x);
  Matrix transform(const Matrix& x) const;
};

struct L1Options {
  double lambda = 0.01;
  std::size_t max_iterations = 10'000;
  double tolerance = 1e-8;
};

/// L1-penalized logistic regression: mean log-loss + lambda * sum |w|, fitted
/// by proximal gradient descent with backtracking. The bias is unpenalized.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0;
  double lambda = 0;
  std::size_t iterations = 0;
  double objective = 0;
  std::vector<double> objective_history;  // one entry per accepted step, starting at the initial point

  double decision(std::span<const double> x) const;
};

LinearModel fit_l1_linear(const Matrix& x, std::span<const int> y, const L1Options& options = {});

struct RfeResult {
  FeatureSet selected;
  /// Features in the order they were removed, with their round (1-based).
  std::vector<std::pair<Feature, std::size_t>> eliminated;
  std::size_t rounds = 0;
  LinearModel final_model;  // fitted on the surviving features
};

/// Recursive feature elimination over fit_l1_linear on standardized columns.
/// Each round removes max(1, floor(step_fraction * remaining)) features with
/// the smallest |weight| (ties: later catalogue position first), never going
/// below target_count.
RfeResult rfe(const Matrix& x, std::span<const int> y, std::span<const Feature> features,
              std::size_t target_count, double step_fraction = 0.05, const L1Options& options = {});

std::size_t rfe_step_size(std::size_t remaining, double step_fraction) noexcept;

void write_correlation_csv(std::ostream& out, const CorrelationReport& report);
void write_correlation_json(std::ostream& out, const CorrelationReport& report);
void write_selection_csv(std::ostream& out, const RfeResult& result, std::span<const Feature> features);
void write_selection_json(std::ostream& out, const RfeResult& result, std::span<const Feature> features);

}  // namespace wikistream
