#include "wikistream/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wikistream/core.hpp"

namespace wikistream {

std::string rng_state(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

Rng rng_from_state(const std::string& state) {
  Rng rng;
  std::istringstream in(state);
  in >> rng;
  if (!in) throw ValidationError("rng", "unreadable generator state");
  return rng;
}

std::size_t subset_size(std::size_t d, bool full_features) noexcept {
  if (full_features) return d;
  auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(d)));
  return std::clamp<std::size_t>(m, 1, d);
}

BaggingForest::BaggingForest(std::size_t n_classes, ForestConfig config) : n_classes_(n_classes), config_(config) {
  if (config_.n_trees == 0) throw ValidationError("n_trees", "need at least one tree");
  if (!(config_.poisson_lambda > 0)) throw ValidationError("poisson_lambda", "must be positive");
  trees_.assign(config_.n_trees, HoeffdingTree(n_classes, config_.tree));
  for (std::size_t i = 0; i < config_.n_trees; ++i) rngs_.push_back(substream(config_.seed, i));
}

void BaggingForest::init_subsets(std::size_t d) {
  std::size_t m = subset_size(d, config_.full_features);
  subsets_.clear();
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    if (m < d) {
      for (std::size_t a = 0; a < m; ++a) {
        std::uniform_int_distribution<std::size_t> pick(a, d - 1);
        std::swap(idx[a], idx[pick(rngs_[i])]);
      }
      idx.resize(m);
      std::sort(idx.begin(), idx.end());
    }
    subsets_.push_back(std::move(idx));
  }
}

std::vector<double> BaggingForest::project(std::size_t tree, std::span<const double> x) const {
  const auto& idx = subsets_[tree];
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = x[idx[k]];
  return out;
}

std::vector<double> BaggingForest::predict_proba(std::span<const double> x) const {
  arity_.check(x.size());
  std::vector<double> p(n_classes_, 0.0);
  if (subsets_.empty()) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n_classes_));
    return p;
  }
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    auto q = trees_[i].predict_proba(project(i, x));
    for (std::size_t c = 0; c < n_classes_; ++c) p[c] += q[c];
  }
  for (auto& v : p) v /= static_cast<double>(trees_.size());
  return p;
}

void BaggingForest::learn_one(std::span<const double> x, int label, double weight) {
  if (label < 0 || static_cast<std::size_t>(label) >= n_classes_)
    throw ValidationError("label", "outside the class list");
  arity_.fix(x.size());
  if (subsets_.empty()) init_subsets(x.size());
  ++seen_;
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    int k = 1;
    if (!config_.unit_weights) k = std::poisson_distribution<int>(config_.poisson_lambda)(rngs_[i]);
    if (k > 0) trees_[i].learn_one(project(i, x), label, weight * k);
  }
}

nlohmann::json BaggingForest::to_json() const {
  nlohmann::json j;
  j["type"] = kind();
  j["n_classes"] = n_classes_;
  j["config"] = {{"n_trees", config_.n_trees},
                 {"full_features", config_.full_features},
                 {"unit_weights", config_.unit_weights},
                 {"poisson_lambda", config_.poisson_lambda},
                 {"tree", wikistream::to_json(config_.tree)},
                 {"seed", config_.seed}};
  j["arity"] = arity_.value() ? nlohmann::json(*arity_.value()) : nlohmann::json(nullptr);
  j["seen"] = seen_;
  j["subsets"] = subsets_;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  auto& rngs = j["rng"] = nlohmann::json::array();
  for (const auto& r : rngs_) rngs.push_back(rng_state(r));
  return j;
}

BaggingForest BaggingForest::from_json(const nlohmann::json& j) {
  const auto& c = j.at("config");
  ForestConfig config;
  config.n_trees = c.at("n_trees");
  config.full_features = c.at("full_features");
  config.unit_weights = c.at("unit_weights");
  config.poisson_lambda = c.at("poisson_lambda");
  config.tree = tree_config_from_json(c.at("tree"));
  config.seed = c.at("seed");
  BaggingForest forest(j.at("n_classes").get<std::size_t>(), config);
  if (!j.at("arity").is_null()) forest.arity_.restore(j.at("arity").get<std::size_t>());
  forest.seen_ = j.at("seen");
  forest.subsets_ = j.at("subsets").get<std::vector<std::vector<std::size_t>>>();
  const auto& trees = j.at("trees");
  const auto& rngs = j.at("rng");
  if (trees.size() != config.n_trees || rngs.size() != config.n_trees)
    throw ValidationError("trees", "member count does not match n_trees");
  for (std::size_t i = 0; i < config.n_trees; ++i) {
    forest.trees_[i] = HoeffdingTree::from_json(trees[i]);
    forest.rngs_[i] = rng_from_state(rngs[i].get<std::string>());
  }
  return forest;
}

OzaBoosting::OzaBoosting(std::size_t n_classes, BoostingConfig config)
    : n_classes_(n_classes),
      config_(config),
      lambda_sc_(config.n_members, 0.0),
      lambda_sw_(config.n_members, 0.0),
      rng_(substream(config.seed, 0)) {
  if (config_.n_members == 0) throw ValidationError("n_members", "need at least one member");
  members_.assign(config_.n_members, HoeffdingTree(n_classes, config_.tree));
}

std::vector<double> OzaBoosting::predict_proba(std::span<const double> x) const {
  arity_.check(x.size());
  std::vector<double> p(n_classes_, 0.0);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    double wrong = lambda_sw_[m] + 1e-16;
    double error = wrong / (lambda_sc_[m] + 1e-16 + wrong);
    double vote = error > 0.5 ? 1.0 : std::log((1.0 - error) / error);
    auto q = members_[m].predict_proba(x);
    for (std::size_t c = 0; c < n_classes_; ++c) p[c] += vote * q[c];
  }
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0)) return std::vector<double>(n_classes_, 1.0 / static_cast<double>(n_classes_));
  for (auto& v : p) v /= total;
  return p;
}

void OzaBoosting::learn_one(std::span<const double> x, int label, double weight) {
  if (label < 0 || static_cast<std::size_t>(label) >= n_classes_)
    throw ValidationError("label", "outside the class list");
  arity_.fix(x.size());
  double lambda = weight;
  for (std::size_t m = 0; m < members_.size(); ++m) {
    int k = std::poisson_distribution<int>(lambda)(rng_);
    if (k > 0) members_[m].learn_one(x, label, k);
    if (members_[m].predict(x) == label) {
      lambda_sc_[m] += lambda;
      lambda *= (lambda_sc_[m] + lambda_sw_[m]) / (2.0 * lambda_sc_[m]);
    } else {
      lambda_sw_[m] += lambda;
      lambda *= (lambda_sc_[m] + lambda_sw_[m]) / (2.0 * lambda_sw_[m]);
    }
  }
}

nlohmann::json OzaBoosting::to_json() const {
  nlohmann::json j;
  j["type"] = kind();
  j["n_classes"] = n_classes_;
  j["config"] = {{"n_members", config_.n_members}, {"tree", wikistream::to_json(config_.tree)}, {"seed", config_.seed}};
  j["arity"] = arity_.value() ? nlohmann::json(*arity_.value()) : nlohmann::json(nullptr);
  j["lambda_sc"] = lambda_sc_;
  j["lambda_sw"] = lambda_sw_;
  j["rng"] = rng_state(rng_);
  auto& members = j["members"] = nlohmann::json::array();
  for (const auto& t : members_) members.push_back(t.to_json());
  return j;
}

OzaBoosting OzaBoosting::from_json(const nlohmann::json& j) {
  const auto& c = j.at("config");
  BoostingConfig config;
  config.n_members = c.at("n_members");
  config.tree = tree_config_from_json(c.at("tree"));
  config.seed = c.at("seed");
  OzaBoosting boost(j.at("n_classes").get<std::size_t>(), config);
  if (!j.at("arity").is_null()) boost.arity_.restore(j.at("arity").get<std::size_t>());
  boost.lambda_sc_ = j.at("lambda_sc").get<std::vector<double>>();
  boost.lambda_sw_ = j.at("lambda_sw").get<std::vector<double>>();
  boost.rng_ = rng_from_state(j.at("rng").get<std::string>());
  const auto& members = j.at("members");
  if (members.size() != config.n_members) throw ValidationError("members", "member count does not match n_members");
  for (std::size_t m = 0; m < config.n_members; ++m) boost.members_[m] = HoeffdingTree::from_json(members[m]);
  return boost;
}

}  // namespace wikistream
