#include "wikistream/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wikistream/core.hpp"

namespace wikistream {

void GaussianEstimator::add(double x, double w) noexcept {
  if (w <= 0) return;
  if (weight == 0) {
    weight = w;
    mean = x;
    m2 = 0;
    min = max = x;
    return;
  }
  double total = weight + w;
  double delta = x - mean;
  mean += delta * w / total;
  m2 += w * delta * (x - mean);
  weight = total;
  min = std::min(min, x);
  max = std::max(max, x);
}

double GaussianEstimator::weight_below(double threshold) const noexcept {
  if (weight == 0 || threshold < min) return 0.0;
  if (threshold >= max) return weight;
  double sd = std::sqrt(variance());
  if (sd <= 0) return mean <= threshold ? weight : 0.0;
  return weight * 0.5 * std::erfc(-(threshold - mean) / (sd * std::numbers::sqrt2));
}

double GaussianEstimator::log_density(double x, double variance_floor) const noexcept {
  double var = std::max(variance(), variance_floor);
  double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

std::vector<double> naive_bayes_posterior(std::span<const double> class_weight,
                                          const std::vector<std::vector<GaussianEstimator>>& stats,
                                          std::span<const double> x) {
  const std::size_t k = class_weight.size();
  double total = 0;
  for (double w : class_weight) total += w;
  if (total <= 0) return std::vector<double>(k, 1.0 / static_cast<double>(k));

  std::vector<double> logp(k, -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < k; ++c) {
    if (class_weight[c] <= 0) continue;
    double lp = std::log(class_weight[c] / total);
    for (std::size_t j = 0; j < x.size() && j < stats[c].size(); ++j)
      if (stats[c][j].weight > 0) lp += stats[c][j].log_density(x[j], kVarianceFloor);
    logp[c] = lp;
  }
  double peak = *std::max_element(logp.begin(), logp.end());
  std::vector<double> p(k, 0.0);
  double sum = 0;
  for (std::size_t c = 0; c < k; ++c) {
    p[c] = std::isinf(logp[c]) ? 0.0 : std::exp(logp[c] - peak);
    sum += p[c];
  }
  for (auto& v : p) v /= sum;
  return p;
}

GaussianNaiveBayes::GaussianNaiveBayes(std::size_t n_classes)
    : class_weight_(n_classes, 0.0), stats_(n_classes) {
  if (n_classes < 2) throw ValidationError("n_classes", "need at least two classes");
}

std::vector<double> GaussianNaiveBayes::predict_proba(std::span<const double> x) const {
  arity_.check(x.size());
  return naive_bayes_posterior(class_weight_, stats_, x);
}

void GaussianNaiveBayes::learn_one(std::span<const double> x, int label, double weight) {
  if (label < 0 || static_cast<std::size_t>(label) >= n_classes())
    throw ValidationError("label", "outside the class list");
  arity_.fix(x.size());
  if (weight <= 0) return;
  auto c = static_cast<std::size_t>(label);
  if (stats_[c].empty()) stats_[c].resize(x.size());
  class_weight_[c] += weight;
  for (std::size_t j = 0; j < x.size(); ++j) stats_[c][j].add(x[j], weight);
}

nlohmann::json to_json(const GaussianEstimator& e) { return {e.weight, e.mean, e.m2, e.min, e.max}; }

GaussianEstimator estimator_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>(),
          j.at(4).get<double>()};
}

nlohmann::json GaussianNaiveBayes::to_json() const {
  nlohmann::json j;
  j["type"] = kind();
  j["class_weight"] = class_weight_;
  j["arity"] = arity_.value() ? nlohmann::json(*arity_.value()) : nlohmann::json(nullptr);
  auto& stats = j["stats"] = nlohmann::json::array();
  for (const auto& per_class : stats_) {
    auto arr = nlohmann::json::array();
    for (const auto& e : per_class) arr.push_back(wikistream::to_json(e));
    stats.push_back(std::move(arr));
  }
  return j;
}

GaussianNaiveBayes GaussianNaiveBayes::from_json(const nlohmann::json& j) {
  auto weights = j.at("class_weight").get<std::vector<double>>();
  GaussianNaiveBayes nb(weights.size());
  nb.class_weight_ = std::move(weights);
  if (!j.at("arity").is_null()) nb.arity_.restore(j.at("arity").get<std::size_t>());
  const auto& stats = j.at("stats");
  for (std::size_t c = 0; c < nb.stats_.size(); ++c)
    for (const auto& e : stats.at(c)) nb.stats_[c].push_back(estimator_from_json(e));
  return nb;
}

}  // namespace wikistream
