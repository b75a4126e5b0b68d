#include "wikistream/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "wikistream/ensemble.hpp"
#include "wikistream/naive_bayes.hpp"
#include "wikistream/stacking.hpp"

namespace wikistream {

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 0 || predicted < 0 || static_cast<std::size_t>(truth) >= n_ || static_cast<std::size_t>(predicted) >= n_)
    throw ValidationError("label", "outside the confusion matrix");
  ++counts_[static_cast<std::size_t>(truth) * n_ + static_cast<std::size_t>(predicted)];
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (auto v : counts_) t += v;
  return t;
}

std::uint64_t ConfusionMatrix::correct() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < n_; ++c) t += at(c, c);
  return t;
}

double ConfusionMatrix::accuracy() const noexcept {
  auto t = total();
  return t ? static_cast<double>(correct()) / static_cast<double>(t) : 0.0;
}

double ConfusionMatrix::precision(std::size_t c) const noexcept {
  std::uint64_t predicted = 0;
  for (std::size_t t = 0; t < n_; ++t) predicted += at(t, c);
  return predicted ? static_cast<double>(at(c, c)) / static_cast<double>(predicted) : 0.0;
}

double ConfusionMatrix::recall(std::size_t c) const noexcept {
  std::uint64_t present = 0;
  for (std::size_t p = 0; p < n_; ++p) present += at(c, p);
  return present ? static_cast<double>(at(c, c)) / static_cast<double>(present) : 0.0;
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix cm(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != rows.size()) throw ValidationError("confusion", "matrix must be square");
    for (std::size_t p = 0; p < rows.size(); ++p) cm.counts_[t * cm.n_ + p] = rows[t][p];
  }
  return cm;
}

double f_measure(const ConfusionMatrix& cm, std::size_t c) {
  if (c >= cm.n_classes()) throw ValidationError("class", "outside the confusion matrix");
  double p = cm.precision(c), r = cm.recall(c);
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

MacroMicro macro_micro(const ConfusionMatrix& cm) {
  MacroMicro m;
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t c = 0; c < cm.n_classes(); ++c) {
    m.macro += f_measure(cm, c);
    for (std::size_t o = 0; o < cm.n_classes(); ++o) {
      if (o == c) continue;
      fp += cm.at(o, c);
      fn += cm.at(c, o);
    }
    tp += cm.at(c, c);
  }
  if (cm.n_classes()) m.macro /= static_cast<double>(cm.n_classes());
  double denom = static_cast<double>(2 * tp + fp + fn);
  m.micro = denom > 0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  return m;
}

Metrics metrics_from(const ConfusionMatrix& cm) {
  Metrics m;
  m.confusion = cm;
  m.accuracy = cm.accuracy();
  for (std::size_t c = 0; c < cm.n_classes(); ++c) m.per_class.push_back({cm.precision(c), cm.recall(c), f_measure(cm, c)});
  auto mm = macro_micro(cm);
  m.macro_f = mm.macro;
  m.micro_f = mm.micro;
  return m;
}

Metrics metrics_from_log(const std::vector<PredictionRecord>& log, std::size_t n_classes, std::size_t first,
                         std::size_t last) {
  last = std::min(last, log.size());
  ConfusionMatrix cm(n_classes);
  for (std::size_t i = first; i < last; ++i) cm.add(log[i].truth, log[i].predicted);
  return metrics_from(cm);
}

std::vector<WindowPoint> window_series(const std::vector<PredictionRecord>& log, std::size_t n_classes,
                                       std::size_t window, std::size_t stride) {
  if (window == 0) throw ValidationError("window", "must be positive");
  if (stride == 0) stride = window;
  std::vector<WindowPoint> out;
  auto point = [&](std::size_t end) {
    auto m = metrics_from_log(log, n_classes, end - std::min(window, end), end);
    out.push_back({end, m.accuracy, m.macro_f});
  };
  std::size_t end = window;
  for (; end <= log.size(); end += stride) point(end);
  if (!log.empty() && (out.empty() || out.back().end != log.size())) point(log.size());
  return out;
}

std::vector<std::string> class_names(Target target) {
  if (target == Target::user_type) return {"human", "bot"};
  return {"positive", "negative"};
}

PrequentialResult prequential_run(const std::vector<DailyAggregate>& stream, ProfileStore& profiles,
                                  OnlineClassifier& classifier, const FeatureSet& features, Target target,
                                  const PrequentialOptions& options) {
  using clock = std::chrono::steady_clock;
  auto* stacking = dynamic_cast<StackingModel*>(&classifier);
  if (stacking && features.features != FeatureSet::stacking_input().features)
    throw ValidationError("feature_set", "stacking requires the stacking feature set");
  if (!stacking && classifier.n_classes() != 2)
    throw ValidationError("classifier", "binary targets need a two-class classifier");

  PrequentialResult result;
  auto& report = result.report;
  report.classifier = classifier.kind();
  report.feature_set = features.name;
  report.target = target;
  report.class_names = class_names(target);
  report.window = options.window;
  ConfusionMatrix cm(2);

  auto started = clock::now();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& aggregate = stream[i];
    auto t0 = clock::now();
    PredictionRecord rec;
    try {
      auto profile = profiles.update(aggregate);
      auto x = to_feature_vector(profile, features).values;
      auto labels = aggregate.labels();
      rec.truth = labels.label(target);
      if (stacking) {
        auto p = stacking->stacking_predict(x);
        rec.probabilities = target == Target::user_type ? p.user_type : p.contribution_type;
        rec.predicted = argmax(rec.probabilities);
        stacking->stacking_learn(x, labels.user_type, labels.contribution_type);
      } else {
        rec.probabilities = classifier.predict_proba(x);
        rec.predicted = argmax(rec.probabilities);
        classifier.learn_one(x, rec.truth);
      }
    } catch (const ValidationError& e) {
      std::string message = e.what();
      if (!e.field().empty()) message.erase(0, e.field().size() + 2);
      throw ValidationError(e.field(), "event " + std::to_string(i) + ": " + message);
    } catch (const std::exception& e) {
      throw std::runtime_error("event " + std::to_string(i) + ": " + e.what());
    }
    auto t1 = clock::now();
    rec.index = i;
    rec.contributor_id = aggregate.contributor_id;
    rec.day = aggregate.day;
    rec.latency_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
    cm.add(rec.truth, rec.predicted);
    result.log.push_back(std::move(rec));
  }
  report.total_seconds = std::chrono::duration<double>(clock::now() - started).count();

  report.n_events = stream.size();
  report.cumulative = metrics_from(cm);
  auto tail = static_cast<std::size_t>(static_cast<double>(stream.size()) * options.final_fraction);
  report.final_window_start = stream.size() - tail;
  report.final_window = metrics_from_log(result.log, 2, report.final_window_start);
  report.series = window_series(result.log, 2, options.window, options.stride);
  if (!stream.empty()) {
    report.ms_per_event = report.total_seconds * 1000.0 / static_cast<double>(stream.size());
    report.events_per_second = report.total_seconds > 0 ? static_cast<double>(stream.size()) / report.total_seconds : 0;
  }
  if (!options.keep_log) result.log.clear();
  return result;
}

bool is_classifier_id(std::string_view id) noexcept {
  return id == "nb" || id == "dt" || id == "rf" || id == "bc" || id == "stacking";
}

std::unique_ptr<OnlineClassifier> make_classifier(std::string_view id, std::uint64_t seed,
                                                  bool stacking_raw_features) {
  if (id == "nb") return std::make_unique<GaussianNaiveBayes>(2);
  if (id == "dt") return std::make_unique<HoeffdingTree>(2);
  if (id == "rf") {
    ForestConfig c;
    c.seed = seed;
    return std::make_unique<BaggingForest>(2, c);
  }
  if (id == "bc") {
    BoostingConfig c;
    c.seed = seed;
    return std::make_unique<OzaBoosting>(2, c);
  }
  if (id == "stacking") {
    StackingConfig c;
    c.seed = seed;
    c.include_raw_features = stacking_raw_features;
    return std::make_unique<StackingModel>(c);
  }
  throw ValidationError("classifier", "unknown classifier '" + std::string(id) + "' (nb, dt, rf, bc, stacking)");
}

std::vector<PrequentialResult> run_grid(const std::vector<DailyAggregate>& stream, const std::vector<GridJob>& jobs,
                                        std::size_t threads, const PrequentialOptions& options) {
  std::vector<PrequentialResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        const auto& job = jobs[i];
        ProfileStore profiles;
        auto classifier = make_classifier(job.classifier, job.seed, job.stacking_raw_features);
        results[i] = prequential_run(stream, profiles, *classifier, job.features, job.target, options);
        results[i].report.seed = job.seed;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

void write_prediction_log_csv(const std::vector<PredictionRecord>& log, const std::vector<std::string>& classes,
                              std::ostream& out) {
  out << "index,contributor_id,day,true,predicted";
  for (const auto& c : classes) out << ",p_" << c;
  out << ",latency_us\n";
  for (const auto& r : log) {
    out << r.index << ',' << r.contributor_id << ',' << format_day(r.day) << ',' << r.truth << ',' << r.predicted;
    for (double p : r.probabilities) out << ',' << format_number(p);
    out << ',' << format_number(r.latency_us) << '\n';
  }
}

namespace {

nlohmann::ordered_json metrics_json(const Metrics& m, const std::vector<std::string>& classes) {
  nlohmann::ordered_json j;
  j["accuracy"] = m.accuracy;
  j["macro_f"] = m.macro_f;
  j["micro_f"] = m.micro_f;
  auto& per = j["per_class"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < m.per_class.size(); ++c)
    per.push_back({{"class", c < classes.size() ? classes[c] : std::to_string(c)},
                   {"precision", m.per_class[c].precision},
                   {"recall", m.per_class[c].recall},
                   {"f", m.per_class[c].f}});
  auto& cm = j["confusion"] = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < m.confusion.n_classes(); ++t) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < m.confusion.n_classes(); ++p) row.push_back(m.confusion.at(t, p));
    cm.push_back(std::move(row));
  }
  return j;
}

}  // namespace

nlohmann::ordered_json report_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["classifier"] = r.classifier;
  j["feature_set"] = r.feature_set;
  j["target"] = std::string(to_string(r.target));
  j["seed"] = r.seed;
  j["classes"] = r.class_names;
  j["n_events"] = r.n_events;
  j["cumulative"] = metrics_json(r.cumulative, r.class_names);
  j["final_window"] = metrics_json(r.final_window, r.class_names);
  j["final_window_start"] = r.final_window_start;
  j["window"] = r.window;
  j["timing"] = {{"total_seconds", r.total_seconds},
                 {"ms_per_event", r.ms_per_event},
                 {"events_per_second", r.events_per_second}};
  return j;
}

void write_report_json(const std::vector<MetricsReport>& reports, std::ostream& out) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  auto& runs = j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) runs.push_back(report_json(r));
  out << j.dump(2) << '\n';
}

void write_report_table(const std::vector<MetricsReport>& reports, std::ostream& out, bool final_window) {
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
    return std::string(buf);
  };
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out << pad("Classifier", 12) << pad("Features", 14) << pad("Target", 19) << pad("Accuracy", 10) << pad("Macro-F", 10)
      << pad("F#0", 10) << pad("F#1", 10) << pad("Time(s)", 10) << "ms/event\n";
  for (const auto& r : reports) {
    const auto& m = final_window ? r.final_window : r.cumulative;
    char time[32], per[32];
    std::snprintf(time, sizeof time, "%.2f", r.total_seconds);
    std::snprintf(per, sizeof per, "%.3f", r.ms_per_event);
    out << pad(r.classifier, 12) << pad(r.feature_set, 14) << pad(std::string(to_string(r.target)), 19)
        << pad(pct(m.accuracy), 10) << pad(pct(m.macro_f), 10)
        << pad(m.per_class.size() > 0 ? pct(m.per_class[0].f) : "-", 10)
        << pad(m.per_class.size() > 1 ? pct(m.per_class[1].f) : "-", 10) << pad(time, 10) << per << '\n';
  }
}

void write_series_csv(const MetricsReport& report, std::ostream& out) {
  out << "end,accuracy,macro_f\n";
  for (const auto& p : report.series)
    out << p.end << ',' << format_number(p.accuracy) << ',' << format_number(p.macro_f) << '\n';
}

}  // namespace wikistream
