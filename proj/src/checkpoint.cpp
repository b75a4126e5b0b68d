#include <algorithm>

#include "wikistream/classifier.hpp"
#include "wikistream/core.hpp"
#include "wikistream/ensemble.hpp"
#include "wikistream/naive_bayes.hpp"
#include "wikistream/stacking.hpp"

namespace wikistream {

int OnlineClassifier::predict(std::span<const double> x) const { return argmax(predict_proba(x)); }

int argmax(std::span<const double> probabilities) noexcept {
  if (probabilities.empty()) return -1;
  return static_cast<int>(std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
}

void ArityGuard::check(std::size_t n) const {
  if (arity_ && *arity_ != n)
    throw ValidationError("x", "expected " + std::to_string(*arity_) + " features, got " + std::to_string(n));
}

void ArityGuard::fix(std::size_t n) {
  check(n);
  arity_ = n;
}

std::unique_ptr<OnlineClassifier> classifier_from_json(const nlohmann::json& j) {
  auto type = j.at("type").get<std::string>();
  if (type == "nb") return std::make_unique<GaussianNaiveBayes>(GaussianNaiveBayes::from_json(j));
  if (type == "dt") return std::make_unique<HoeffdingTree>(HoeffdingTree::from_json(j));
  if (type == "rf") return std::make_unique<BaggingForest>(BaggingForest::from_json(j));
  if (type == "bc") return std::make_unique<OzaBoosting>(OzaBoosting::from_json(j));
  if (type == "stacking") return std::make_unique<StackingModel>(StackingModel::from_json(j));
  throw ValidationError("type", "unknown classifier '" + type + "'");
}

}  // namespace wikistream
