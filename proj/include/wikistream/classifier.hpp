#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace wikistream {

/// Predict-then-learn contract shared by every stream classifier. predict_proba
/// never mutates state; its output sums to one.
class OnlineClassifier {
 public:
  virtual ~OnlineClassifier() = default;

  virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;
  virtual void learn_one(std::span<const double> x, int label, double weight = 1.0) = 0;
  virtual std::size_t n_classes() const noexcept = 0;
  virtual std::string kind() const = 0;
  /// Full state including RNG streams; classifier_from_json restores it.
  virtual nlohmann::json to_json() const = 0;

  int predict(std::span<const double> x) const;
};

/// Index of the largest probability, lowest index on ties.
int argmax(std::span<const double> probabilities) noexcept;

std::unique_ptr<OnlineClassifier> classifier_from_json(const nlohmann::json& j);

/// Arity is unset until the first learn_one; afterwards every input must match.
class ArityGuard {
 public:
  void check(std::size_t n) const;
  void fix(std::size_t n);
  std::optional<std::size_t> value() const noexcept { return arity_; }
  void restore(std::optional<std::size_t> n) noexcept { arity_ = n; }

 private:
  std::optional<std::size_t> arity_;
};

}  // namespace wikistream
