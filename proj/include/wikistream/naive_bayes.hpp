#pragma once

#include <vector>

#include "wikistream/classifier.hpp"

namespace wikistream {

/// Weighted Welford accumulator for one feature of one class.
struct GaussianEstimator {
  double weight = 0;
  double mean = 0;
  double m2 = 0;
  double min = 0;
  double max = 0;

  void add(double x, double w) noexcept;
  double variance() const noexcept { return weight > 1 ? m2 / (weight - 1) : 0.0; }
  /// Weight expected at or below `threshold` under the fitted normal.
  double weight_below(double threshold) const noexcept;
  double log_density(double x, double variance_floor) const noexcept;
};

inline constexpr double kVarianceFloor = 1e-9;

/// Gaussian naive Bayes with class priors from observed weights.
class GaussianNaiveBayes final : public OnlineClassifier {
 public:
  explicit GaussianNaiveBayes(std::size_t n_classes = 2);

  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn_one(std::span<const double> x, int label, double weight = 1.0) override;
  std::size_t n_classes() const noexcept override { return class_weight_.size(); }
  std::string kind() const override { return "nb"; }
  nlohmann::json to_json() const override;
  static GaussianNaiveBayes from_json(const nlohmann::json& j);

 private:
  std::vector<double> class_weight_;
  std::vector<std::vector<GaussianEstimator>> stats_;  // [class][feature]
  ArityGuard arity_;
};

/// Posterior over classes from class weights and per-class estimators; shared
/// with the Hoeffding tree's naive Bayes leaves. Uniform when no weight is known.
std::vector<double> naive_bayes_posterior(std::span<const double> class_weight,
                                          const std::vector<std::vector<GaussianEstimator>>& stats,
                                          std::span<const double> x);

nlohmann::json to_json(const GaussianEstimator& e);
GaussianEstimator estimator_from_json(const nlohmann::json& j);

}  // namespace wikistream
