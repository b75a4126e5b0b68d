#pragma once

#include <cstddef>
#include <vector>

#include "wikistream/classifier.hpp"
#include "wikistream/naive_bayes.hpp"

namespace wikistream {

/// sqrt(R^2 ln(1/delta) / (2n)).
double hoeffding_bound(double range, double delta, double n) noexcept;

struct HoeffdingTreeConfig {
  std::size_t grace_period = 200;
  double split_confidence = 1e-7;  // delta
  double tie_threshold = 0.05;
  std::size_t n_split_points = 10;
  double min_branch_fraction = 0.01;
  std::size_t max_depth = 30;
  bool naive_bayes_leaves = true;  // naive-Bayes-adaptive leaf prediction
};

nlohmann::json to_json(const HoeffdingTreeConfig& c);
HoeffdingTreeConfig tree_config_from_json(const nlohmann::json& j);

/// Very fast decision tree over numeric features: leaves keep per-class
/// Gaussian estimators, split with information gain once the Hoeffding bound
/// separates the two best candidates.
class HoeffdingTree final : public OnlineClassifier {
 public:
  explicit HoeffdingTree(std::size_t n_classes = 2, HoeffdingTreeConfig config = {});

  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn_one(std::span<const double> x, int label, double weight = 1.0) override;
  std::size_t n_classes() const noexcept override { return n_classes_; }
  std::string kind() const override { return "dt"; }
  nlohmann::json to_json() const override;
  static HoeffdingTree from_json(const nlohmann::json& j);

  const HoeffdingTreeConfig& config() const noexcept { return config_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t leaf_count() const noexcept;
  std::size_t depth() const noexcept;
  /// Number of split evaluations performed so far (successful or not).
  std::size_t split_attempts() const noexcept { return split_attempts_; }

 private:
  struct Node {
    bool leaf = true;
    std::size_t depth = 0;
    // Internal nodes: x[feature] <= threshold goes left.
    std::size_t feature = 0;
    double threshold = 0;
    std::size_t left = 0;
    std::size_t right = 0;
    // Leaves.
    std::vector<double> class_weight;
    std::vector<std::vector<GaussianEstimator>> stats;  // [class][feature]
    double weight_at_last_attempt = 0;
    double mc_correct = 0;
    double nb_correct = 0;
  };

  std::size_t route(std::span<const double> x) const noexcept;
  std::vector<double> leaf_proba(const Node& leaf, std::span<const double> x) const;
  void attempt_split(std::size_t leaf_index);

  std::size_t n_classes_;
  HoeffdingTreeConfig config_;
  std::vector<Node> nodes_;
  std::size_t split_attempts_ = 0;
  ArityGuard arity_;
};

}  // namespace wikistream
