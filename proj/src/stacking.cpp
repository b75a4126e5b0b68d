#include "wikistream/stacking.hpp"

#include <algorithm>

namespace wikistream {

namespace {

ForestConfig level_config(const StackingConfig& c, std::uint64_t level) {
  ForestConfig f;
  f.n_trees = c.n_trees;
  f.full_features = c.full_features;
  f.tree = c.tree;
  f.seed = splitmix64(c.seed + level);
  return f;
}

std::vector<std::size_t> columns_of(const FeatureSet& input, const FeatureSet& wanted) {
  std::vector<std::size_t> idx;
  for (auto f : wanted.features) {
    auto it = std::find(input.features.begin(), input.features.end(), f);
    idx.push_back(static_cast<std::size_t>(it - input.features.begin()));
  }
  return idx;
}

std::vector<double> gather(std::span<const double> x, const std::vector<std::size_t>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = x[idx[k]];
  return out;
}

}  // namespace

StackingModel::StackingModel(StackingConfig config)
    : config_(config),
      input_(FeatureSet::stacking_input()),
      user_columns_(columns_of(input_, FeatureSet::user_type_selected())),
      contribution_columns_(columns_of(input_, FeatureSet::contribution_type_selected())),
      user_(2, level_config(config, 1)),
      contribution_(2, level_config(config, 2)),
      final_(2, level_config(config, 3)) {}

std::size_t StackingModel::level2_arity() const noexcept {
  return 2 + (config_.include_raw_features ? contribution_columns_.size() : 0);
}

void StackingModel::check_arity(std::size_t n) const {
  if (n != input_.features.size())
    throw ValidationError("x", "stacking expects " + std::to_string(input_.features.size()) + " columns, got " +
                                   std::to_string(n));
}

std::vector<double> StackingModel::level2_input(std::span<const double> x, double p_bot, double p_malign) const {
  std::vector<double> z{p_bot, p_malign};
  if (config_.include_raw_features)
    for (auto k : contribution_columns_) z.push_back(x[k]);
  return z;
}

StackingPrediction StackingModel::stacking_predict(std::span<const double> x) const {
  check_arity(x.size());
  StackingPrediction p;
  p.user_type = user_.predict_proba(gather(x, user_columns_));
  p.contribution_l1 = contribution_.predict_proba(gather(x, contribution_columns_));
  p.contribution_type = final_.predict_proba(level2_input(x, p.user_type[1], p.contribution_l1[1]));
  p.joint = joint_class(static_cast<UserType>(argmax(p.user_type)),
                        static_cast<ContributionType>(argmax(p.contribution_type)));
  return p;
}

void StackingModel::stacking_learn(std::span<const double> x, UserType user, ContributionType contribution) {
  check_arity(x.size());
  auto xu = gather(x, user_columns_);
  auto xc = gather(x, contribution_columns_);
  auto z = level2_input(x, user_.predict_proba(xu)[1], contribution_.predict_proba(xc)[1]);
  user_.learn_one(xu, static_cast<int>(user));
  contribution_.learn_one(xc, static_cast<int>(contribution));
  final_.learn_one(z, static_cast<int>(contribution));
}

std::vector<double> StackingModel::predict_proba(std::span<const double> x) const {
  auto p = stacking_predict(x);
  std::vector<double> joint(4);
  for (int u = 0; u < 2; ++u)
    for (int c = 0; c < 2; ++c) joint[static_cast<std::size_t>(2 * u + c)] = p.user_type[u] * p.contribution_type[c];
  return joint;
}

void StackingModel::learn_one(std::span<const double> x, int label, double /*weight*/) {
  if (label < 0 || label > 3) throw ValidationError("label", "outside the class list");
  auto joint = static_cast<JointClass>(label);
  stacking_learn(x, user_of(joint), contribution_of(joint));
}

nlohmann::json StackingModel::to_json() const {
  nlohmann::json j;
  j["type"] = kind();
  j["config"] = {{"n_trees", config_.n_trees},
                 {"full_features", config_.full_features},
                 {"include_raw_features", config_.include_raw_features},
                 {"tree", wikistream::to_json(config_.tree)},
                 {"seed", config_.seed}};
  j["level1a"] = user_.to_json();
  j["level1b"] = contribution_.to_json();
  j["level2"] = final_.to_json();
  return j;
}

StackingModel StackingModel::from_json(const nlohmann::json& j) {
  const auto& c = j.at("config");
  StackingConfig config;
  config.n_trees = c.at("n_trees");
  config.full_features = c.at("full_features");
  config.include_raw_features = c.at("include_raw_features");
  config.tree = tree_config_from_json(c.at("tree"));
  config.seed = c.at("seed");
  StackingModel model(config);
  model.user_ = BaggingForest::from_json(j.at("level1a"));
  model.contribution_ = BaggingForest::from_json(j.at("level1b"));
  model.final_ = BaggingForest::from_json(j.at("level2"));
  return model;
}

}  // namespace wikistream
