#pragma once

#include <cstdint>
#include <vector>

#include "wikistream/classifier.hpp"
#include "wikistream/hoeffding_tree.hpp"
#include "wikistream/random.hpp"

namespace wikistream {

struct ForestConfig {
  std::size_t n_trees = 10;
  bool full_features = false;  // false: each tree sees a random sqrt(d) subset
  bool unit_weights = false;   // true: every tree sees every example once (no Poisson draw)
  double poisson_lambda = 1.0;
  HoeffdingTreeConfig tree;
  std::uint64_t seed = 0;
};

/// Online bagging of Hoeffding trees. Tree i draws its Poisson weights and its
/// feature subset from substream(seed, i); the subset is fixed when the first
/// example arrives. Prediction is the mean of the member distributions.
class BaggingForest final : public OnlineClassifier {
 public:
  explicit BaggingForest(std::size_t n_classes = 2, ForestConfig config = {});

  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn_one(std::span<const double> x, int label, double weight = 1.0) override;
  std::size_t n_classes() const noexcept override { return n_classes_; }
  std::string kind() const override { return "rf"; }
  nlohmann::json to_json() const override;
  static BaggingForest from_json(const nlohmann::json& j);

  const ForestConfig& config() const noexcept { return config_; }
  const std::vector<HoeffdingTree>& trees() const noexcept { return trees_; }
  const std::vector<std::vector<std::size_t>>& subsets() const noexcept { return subsets_; }
  /// Examples passed to learn_one so far.
  std::uint64_t seen() const noexcept { return seen_; }

 private:
  void init_subsets(std::size_t d);
  std::vector<double> project(std::size_t tree, std::span<const double> x) const;

  std::size_t n_classes_;
  ForestConfig config_;
  std::vector<HoeffdingTree> trees_;
  std::vector<Rng> rngs_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::uint64_t seen_ = 0;
  ArityGuard arity_;
};

/// Number of features each forest member sees for input arity d.
std::size_t subset_size(std::size_t d, bool full_features) noexcept;

struct BoostingConfig {
  std::size_t n_members = 10;
  HoeffdingTreeConfig tree;
  std::uint64_t seed = 0;
};

/// Oza online boosting over Hoeffding trees.
class OzaBoosting final : public OnlineClassifier {
 public:
  explicit OzaBoosting(std::size_t n_classes = 2, BoostingConfig config = {});

  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn_one(std::span<const double> x, int label, double weight = 1.0) override;
  std::size_t n_classes() const noexcept override { return n_classes_; }
  std::string kind() const override { return "bc"; }
  nlohmann::json to_json() const override;
  static OzaBoosting from_json(const nlohmann::json& j);

  const std::vector<double>& correct_weight() const noexcept { return lambda_sc_; }
  const std::vector<double>& wrong_weight() const noexcept { return lambda_sw_; }

 private:
  std::size_t n_classes_;
  BoostingConfig config_;
  std::vector<HoeffdingTree> members_;
  std::vector<double> lambda_sc_;
  std::vector<double> lambda_sw_;
  Rng rng_;
  ArityGuard arity_;
};

std::string rng_state(const Rng& rng);
Rng rng_from_state(const std::string& state);

}  // namespace wikistream
