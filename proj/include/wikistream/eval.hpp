#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wikistream/classifier.hpp"
#include "wikistream/core.hpp"
#include "wikistream/profile.hpp"

namespace wikistream {

/// Square count matrix indexed (true, predicted).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes = 2) : n_(n_classes), counts_(n_classes * n_classes, 0) {}

  void add(int truth, int predicted);
  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n_ + predicted]; }
  std::size_t n_classes() const noexcept { return n_; }
  std::uint64_t total() const noexcept;
  std::uint64_t correct() const noexcept;
  double accuracy() const noexcept;
  double precision(std::size_t c) const noexcept;
  double recall(std::size_t c) const noexcept;

  static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

/// 2PR/(P+R), zero when P + R = 0.
double f_measure(const ConfusionMatrix& cm, std::size_t c);

struct MacroMicro {
  double macro = 0;
  double micro = 0;
};
MacroMicro macro_micro(const ConfusionMatrix& cm);

struct PredictionRecord {
  std::size_t index = 0;
  std::string contributor_id;
  Day day{};
  int truth = 0;
  int predicted = 0;
  std::vector<double> probabilities;
  double latency_us = 0;
};

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f = 0;
};

struct WindowPoint {
  std::size_t end = 0;  // exclusive event index
  double accuracy = 0;
  double macro_f = 0;
};

struct Metrics {
  ConfusionMatrix confusion{2};
  double accuracy = 0;
  std::vector<ClassMetrics> per_class;
  double macro_f = 0;
  double micro_f = 0;
};

Metrics metrics_from(const ConfusionMatrix& cm);
/// Recomputes metrics over log[first, last) from the recorded predictions.
Metrics metrics_from_log(const std::vector<PredictionRecord>& log, std::size_t n_classes, std::size_t first = 0,
                         std::size_t last = SIZE_MAX);

struct MetricsReport {
  std::string classifier;
  std::string feature_set;
  Target target = Target::contribution_type;
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  std::size_t n_events = 0;
  Metrics cumulative;    // every event, accumulated during the run
  Metrics final_window;  // last 20% of the stream
  std::size_t final_window_start = 0;
  std::size_t window = 1000;
  std::vector<WindowPoint> series;
  double total_seconds = 0;
  double ms_per_event = 0;
  double events_per_second = 0;
};

struct PrequentialOptions {
  std::size_t window = 1000;
  std::size_t stride = 0;  // 0: same as window
  double final_fraction = 0.2;
  bool keep_log = true;
};

struct PrequentialResult {
  MetricsReport report;
  std::vector<PredictionRecord> log;
};

/// Test-then-train over a time-ordered aggregate stream: per aggregate the
/// contributor profile is updated, the snapshot is predicted, the prediction
/// recorded and only then the classifier learns the aggregate's label. A
/// StackingModel is driven through its two-target interface and reports the
/// requested target (final level-2 output for contribution type).
PrequentialResult prequential_run(const std::vector<DailyAggregate>& stream, ProfileStore& profiles,
                                  OnlineClassifier& classifier, const FeatureSet& features, Target target,
                                  const PrequentialOptions& options = {});

/// Sliding-window series over a prediction log.
std::vector<WindowPoint> window_series(const std::vector<PredictionRecord>& log, std::size_t n_classes,
                                       std::size_t window, std::size_t stride);

std::vector<std::string> class_names(Target target);

/// Classifier ids: nb, dt, rf, bc, stacking. `rf` uses 10 trees with sqrt
/// feature subsets; `stacking` uses three 15-tree forests on full subsets.
std::unique_ptr<OnlineClassifier> make_classifier(std::string_view id, std::uint64_t seed,
                                                  bool stacking_raw_features = true);
bool is_classifier_id(std::string_view id) noexcept;

struct GridJob {
  std::string classifier;
  FeatureSet features;
  Target target = Target::contribution_type;
  std::uint64_t seed = 0;
  bool stacking_raw_features = true;
};

/// Runs independent prequential jobs on up to `threads` workers; results keep
/// job order and are identical to running the jobs one by one.
std::vector<PrequentialResult> run_grid(const std::vector<DailyAggregate>& stream, const std::vector<GridJob>& jobs,
                                        std::size_t threads, const PrequentialOptions& options = {});

void write_prediction_log_csv(const std::vector<PredictionRecord>& log, const std::vector<std::string>& classes,
                              std::ostream& out);
nlohmann::ordered_json report_json(const MetricsReport& report);
void write_report_json(const std::vector<MetricsReport>& reports, std::ostream& out);
/// Plain-text table: one row per report with accuracy, macro-F, per-class F,
/// time and ms/event (percentages with two decimals).
void write_report_table(const std::vector<MetricsReport>& reports, std::ostream& out, bool final_window = false);
void write_series_csv(const MetricsReport& report, std::ostream& out);

}  // namespace wikistream
