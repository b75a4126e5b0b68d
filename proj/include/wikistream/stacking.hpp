#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wikistream/core.hpp"
#include "wikistream/ensemble.hpp"

namespace wikistream {

struct StackingConfig {
  std::size_t n_trees = 15;
  bool full_features = true;
  // Level 2 sees [P(bot), P(malign)] plus the contribution-type columns; off
  // leaves only the two level-1 probabilities.
  bool include_raw_features = true;
  HoeffdingTreeConfig tree;
  std::uint64_t seed = 0;
};

struct StackingPrediction {
  std::vector<double> user_type;          // level 1a
  std::vector<double> contribution_l1;    // level 1b
  std::vector<double> contribution_type;  // level 2 (final)
  JointClass joint = JointClass::human_benign;
};

/// Two-level stack of three bagging forests. Input columns follow
/// FeatureSet::stacking_input(); as an OnlineClassifier it predicts the four
/// joint classes (product of the user-type and final contribution-type
/// distributions).
class StackingModel final : public OnlineClassifier {
 public:
  explicit StackingModel(StackingConfig config = {});

  StackingPrediction stacking_predict(std::span<const double> x) const;
  void stacking_learn(std::span<const double> x, UserType user, ContributionType contribution);

  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn_one(std::span<const double> x, int label, double weight = 1.0) override;
  std::size_t n_classes() const noexcept override { return 4; }
  std::string kind() const override { return "stacking"; }
  nlohmann::json to_json() const override;
  static StackingModel from_json(const nlohmann::json& j);

  const StackingConfig& config() const noexcept { return config_; }
  const BaggingForest& user_forest() const noexcept { return user_; }
  const BaggingForest& contribution_forest() const noexcept { return contribution_; }
  const BaggingForest& final_forest() const noexcept { return final_; }
  std::size_t input_arity() const noexcept { return input_.features.size(); }
  std::size_t level2_arity() const noexcept;

  /// Level-2 input for x given the level-1 outputs.
  std::vector<double> level2_input(std::span<const double> x, double p_bot, double p_malign) const;

 private:
  void check_arity(std::size_t n) const;

  StackingConfig config_;
  FeatureSet input_;
  std::vector<std::size_t> user_columns_;
  std::vector<std::size_t> contribution_columns_;
  BaggingForest user_;
  BaggingForest contribution_;
  BaggingForest final_;
};

}  // namespace wikistream
