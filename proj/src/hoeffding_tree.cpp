#include "wikistream/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wikistream/core.hpp"

namespace wikistream {

namespace {

double entropy(std::span<const double> dist) {
  double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  if (total <= 0) return 0.0;
  double h = 0;
  for (double w : dist)
    if (w > 0) h -= (w / total) * std::log2(w / total);
  return h;
}

// Information gain of a binary split; -inf when fewer than two branches hold
// at least `min_fraction` of the weight.
double info_gain(std::span<const double> parent, std::span<const double> left, std::span<const double> right,
                 double min_fraction) {
  double total = std::accumulate(parent.begin(), parent.end(), 0.0);
  double wl = std::accumulate(left.begin(), left.end(), 0.0);
  double wr = std::accumulate(right.begin(), right.end(), 0.0);
  if (total <= 0 || wl / total < min_fraction || wr / total < min_fraction)
    return -std::numeric_limits<double>::infinity();
  return entropy(parent) - (wl / total) * entropy(left) - (wr / total) * entropy(right);
}

}  // namespace

double hoeffding_bound(double range, double delta, double n) noexcept {
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

HoeffdingTree::HoeffdingTree(std::size_t n_classes, HoeffdingTreeConfig config)
    : n_classes_(n_classes), config_(config) {
  if (n_classes < 2) throw ValidationError("n_classes", "need at least two classes");
  Node root;
  root.class_weight.assign(n_classes_, 0.0);
  root.stats.resize(n_classes_);
  nodes_.push_back(std::move(root));
}

std::size_t HoeffdingTree::route(std::span<const double> x) const noexcept {
  std::size_t i = 0;
  while (!nodes_[i].leaf) i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  return i;
}

std::vector<double> HoeffdingTree::leaf_proba(const Node& leaf, std::span<const double> x) const {
  double total = std::accumulate(leaf.class_weight.begin(), leaf.class_weight.end(), 0.0);
  if (total <= 0) return std::vector<double>(n_classes_, 1.0 / static_cast<double>(n_classes_));
  if (config_.naive_bayes_leaves && leaf.nb_correct >= leaf.mc_correct)
    return naive_bayes_posterior(leaf.class_weight, leaf.stats, x);
  std::vector<double> p(leaf.class_weight);
  for (auto& v : p) v /= total;
  return p;
}

std::vector<double> HoeffdingTree::predict_proba(std::span<const double> x) const {
  arity_.check(x.size());
  if (!arity_.value()) return std::vector<double>(n_classes_, 1.0 / static_cast<double>(n_classes_));
  return leaf_proba(nodes_[route(x)], x);
}

void HoeffdingTree::learn_one(std::span<const double> x, int label, double weight) {
  if (label < 0 || static_cast<std::size_t>(label) >= n_classes_)
    throw ValidationError("label", "outside the class list");
  arity_.fix(x.size());
  if (weight <= 0) return;
  std::size_t index = route(x);
  Node& leaf = nodes_[index];
  auto c = static_cast<std::size_t>(label);

  if (config_.naive_bayes_leaves && std::accumulate(leaf.class_weight.begin(), leaf.class_weight.end(), 0.0) > 0) {
    if (argmax(leaf.class_weight) == label) leaf.mc_correct += weight;
    if (argmax(naive_bayes_posterior(leaf.class_weight, leaf.stats, x)) == label) leaf.nb_correct += weight;
  }
  leaf.class_weight[c] += weight;
  if (leaf.stats[c].empty()) leaf.stats[c].resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) leaf.stats[c][j].add(x[j], weight);

  double seen = std::accumulate(leaf.class_weight.begin(), leaf.class_weight.end(), 0.0);
  if (seen - leaf.weight_at_last_attempt >= static_cast<double>(config_.grace_period)) {
    leaf.weight_at_last_attempt = seen;
    attempt_split(index);
  }
}

void HoeffdingTree::attempt_split(std::size_t leaf_index) {
  ++split_attempts_;
  const Node& leaf = nodes_[leaf_index];
  if (leaf.depth >= config_.max_depth) return;
  auto observed = std::count_if(leaf.class_weight.begin(), leaf.class_weight.end(), [](double w) { return w > 0; });
  if (observed < 2) return;

  const std::size_t d = *arity_.value();
  // Class distribution as seen by the estimators (children start with
  // inherited class weights but no estimators).
  std::vector<double> parent(n_classes_, 0.0);
  for (std::size_t c = 0; c < n_classes_; ++c)
    if (!leaf.stats[c].empty()) parent[c] = leaf.stats[c][0].weight;

  struct Candidate {
    double merit = -std::numeric_limits<double>::infinity();
    std::size_t feature = 0;
    double threshold = 0;
    std::vector<double> left, right;
  };
  std::vector<Candidate> best_per_feature;
  std::vector<double> left(n_classes_), right(n_classes_);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t c = 0; c < n_classes_; ++c) {
      if (leaf.stats[c].empty() || leaf.stats[c][j].weight <= 0) continue;
      lo = std::min(lo, leaf.stats[c][j].min);
      hi = std::max(hi, leaf.stats[c][j].max);
    }
    if (!(lo < hi)) continue;
    Candidate best;
    best.feature = j;
    for (std::size_t s = 0; s < config_.n_split_points; ++s) {
      double t = lo + (hi - lo) * static_cast<double>(s + 1) / static_cast<double>(config_.n_split_points + 1);
      for (std::size_t c = 0; c < n_classes_; ++c) {
        left[c] = leaf.stats[c].empty() ? 0.0 : leaf.stats[c][j].weight_below(t);
        right[c] = parent[c] - left[c];
      }
      double merit = info_gain(parent, left, right, config_.min_branch_fraction);
      if (merit > best.merit) {
        best.merit = merit;
        best.threshold = t;
        best.left = left;
        best.right = right;
      }
    }
    if (std::isfinite(best.merit)) best_per_feature.push_back(std::move(best));
  }
  if (best_per_feature.empty()) return;
  std::stable_sort(best_per_feature.begin(), best_per_feature.end(),
                   [](const Candidate& a, const Candidate& b) { return a.merit > b.merit; });

  const Candidate& best = best_per_feature.front();
  double second = best_per_feature.size() > 1 ? std::max(best_per_feature[1].merit, 0.0) : 0.0;
  double n = std::accumulate(leaf.class_weight.begin(), leaf.class_weight.end(), 0.0);
  double epsilon = hoeffding_bound(std::log2(static_cast<double>(n_classes_)), config_.split_confidence, n);
  if (best.merit <= 0) return;
  if (!(best.merit - second > epsilon || epsilon < config_.tie_threshold)) return;

  std::size_t depth = leaf.depth + 1;
  auto make_child = [&](const std::vector<double>& dist) {
    Node child;
    child.depth = depth;
    child.class_weight = dist;
    child.stats.resize(n_classes_);
    child.weight_at_last_attempt = std::accumulate(dist.begin(), dist.end(), 0.0);
    return child;
  };
  Node left_child = make_child(best.left);
  Node right_child = make_child(best.right);
  std::size_t feature = best.feature;
  double threshold = best.threshold;

  nodes_.push_back(std::move(left_child));
  nodes_.push_back(std::move(right_child));
  Node& split = nodes_[leaf_index];
  split.leaf = false;
  split.feature = feature;
  split.threshold = threshold;
  split.left = nodes_.size() - 2;
  split.right = nodes_.size() - 1;
  split.class_weight.clear();
  split.stats.clear();
}

std::size_t HoeffdingTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

std::size_t HoeffdingTree::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

nlohmann::json to_json(const HoeffdingTreeConfig& c) {
  return {{"grace_period", c.grace_period},
          {"split_confidence", c.split_confidence},
          {"tie_threshold", c.tie_threshold},
          {"n_split_points", c.n_split_points},
          {"min_branch_fraction", c.min_branch_fraction},
          {"max_depth", c.max_depth},
          {"naive_bayes_leaves", c.naive_bayes_leaves}};
}

HoeffdingTreeConfig tree_config_from_json(const nlohmann::json& j) {
  HoeffdingTreeConfig c;
  c.grace_period = j.at("grace_period");
  c.split_confidence = j.at("split_confidence");
  c.tie_threshold = j.at("tie_threshold");
  c.n_split_points = j.at("n_split_points");
  c.min_branch_fraction = j.at("min_branch_fraction");
  c.max_depth = j.at("max_depth");
  c.naive_bayes_leaves = j.at("naive_bayes_leaves");
  return c;
}

nlohmann::json HoeffdingTree::to_json() const {
  nlohmann::json j;
  j["type"] = kind();
  j["n_classes"] = n_classes_;
  j["config"] = wikistream::to_json(config_);
  j["arity"] = arity_.value() ? nlohmann::json(*arity_.value()) : nlohmann::json(nullptr);
  j["split_attempts"] = split_attempts_;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nlohmann::json node;
    node["depth"] = n.depth;
    if (!n.leaf) {
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
    } else {
      node["class_weight"] = n.class_weight;
      node["last_attempt"] = n.weight_at_last_attempt;
      node["mc_correct"] = n.mc_correct;
      node["nb_correct"] = n.nb_correct;
      auto& stats = node["stats"] = nlohmann::json::array();
      for (const auto& per_class : n.stats) {
        auto arr = nlohmann::json::array();
        for (const auto& e : per_class) arr.push_back(wikistream::to_json(e));
        stats.push_back(std::move(arr));
      }
    }
    nodes.push_back(std::move(node));
  }
  return j;
}

HoeffdingTree HoeffdingTree::from_json(const nlohmann::json& j) {
  HoeffdingTree tree(j.at("n_classes").get<std::size_t>(), tree_config_from_json(j.at("config")));
  if (!j.at("arity").is_null()) tree.arity_.restore(j.at("arity").get<std::size_t>());
  tree.split_attempts_ = j.at("split_attempts");
  tree.nodes_.clear();
  for (const auto& node : j.at("nodes")) {
    Node n;
    n.depth = node.at("depth");
    if (node.contains("feature")) {
      n.leaf = false;
      n.feature = node.at("feature");
      n.threshold = node.at("threshold");
      n.left = node.at("left");
      n.right = node.at("right");
    } else {
      n.class_weight = node.at("class_weight").get<std::vector<double>>();
      n.weight_at_last_attempt = node.at("last_attempt");
      n.mc_correct = node.at("mc_correct");
      n.nb_correct = node.at("nb_correct");
      for (const auto& per_class : node.at("stats")) {
        std::vector<GaussianEstimator> es;
        for (const auto& e : per_class) es.push_back(estimator_from_json(e));
        n.stats.push_back(std::move(es));
      }
    }
    tree.nodes_.push_back(std::move(n));
  }
  return tree;
}

}  // namespace wikistream
