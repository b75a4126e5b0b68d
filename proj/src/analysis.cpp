#include "wikistream/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "wikistream/kernels.hpp"

namespace wikistream {

namespace {

double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// Mean logistic loss at (w, b); fills the linear predictor z.
double smooth_loss(const Matrix& x, std::span<const int> y, std::span<const double> w, double b,
                   std::vector<double>& z) {
  kernels::omp::matvec(x, w, b, z);
  double loss = 0;
  for (std::size_t i = 0; i < z.size(); ++i) loss += log1p_exp(z[i]) - (y[i] ? z[i] : 0.0);
  return loss / static_cast<double>(z.size());
}

double l1_norm(std::span<const double> w) {
  double s = 0;
  for (double v : w) s += std::abs(v);
  return s;
}

nlohmann::ordered_json json_number(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("y", "length mismatch with x");
  if (x.size() < 2) throw ValidationError("x", "need at least two samples");
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ValidationError("x", "correlation undefined for a constant vector");
  if (syy == 0.0) throw ValidationError("y", "correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Matrix feature_matrix(std::span<const DailyAggregate> aggregates, std::span<const Feature> features) {
  Matrix m(aggregates.size(), features.size());
  for (std::size_t r = 0; r < aggregates.size(); ++r) {
    auto all = aggregates[r].day_features();
    for (std::size_t c = 0; c < features.size(); ++c) m(r, c) = all[index_of(features[c])];
  }
  return m;
}

std::vector<int> target_vector(std::span<const DailyAggregate> aggregates, Target target) {
  std::vector<int> y;
  y.reserve(aggregates.size());
  for (const auto& a : aggregates) y.push_back(a.labels().label(target));
  return y;
}

std::vector<CorrelationEntry> CorrelationReport::reported() const {
  std::vector<CorrelationEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const auto& e) { return e.reported; });
  return out;
}

CorrelationReport correlation_report(std::span<const DailyAggregate> aggregates, Target target,
                                     double threshold) {
  if (aggregates.size() < 2) throw ValidationError("aggregates", "need at least two aggregates");
  CorrelationReport report;
  report.target = target;
  report.threshold = threshold;
  report.features.assign(all_features().begin(), all_features().end());

  // Target rides along as the last column so one kernel call yields both
  // feature-feature and feature-target coefficients.
  Matrix data(aggregates.size(), kFeatureCount + 1);
  auto y = target_vector(aggregates, target);
  for (std::size_t r = 0; r < aggregates.size(); ++r) {
    auto f = aggregates[r].day_features();
    for (std::size_t c = 0; c < kFeatureCount; ++c) data(r, c) = f[c];
    data(r, kFeatureCount) = y[r];
  }
  Matrix full = kernels::omp::correlation_matrix(data);

  report.feature_matrix = Matrix(kFeatureCount, kFeatureCount);
  for (std::size_t a = 0; a < kFeatureCount; ++a)
    for (std::size_t b = 0; b < kFeatureCount; ++b) report.feature_matrix(a, b) = full(a, b);

  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    Feature f = report.features[c];
    if (std::isnan(full(c, c))) {
      report.undefined.push_back(f);
      continue;
    }
    double r = full(c, kFeatureCount);
    if (std::isnan(r)) continue;  // constant target: nothing is reportable
    report.entries.push_back({f, r, std::abs(r) > threshold});
  }
  return report;
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  s.mean.assign(x.cols(), 0.0);
  s.scale.assign(x.cols(), 0.0);
  auto n = static_cast<double>(x.rows());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double m = 0;
    for (std::size_t r = 0; r < x.rows(); ++r) m += x(r, c);
    m /= n;
    double v = 0;
    for (std::size_t r = 0; r < x.rows(); ++r) v += (x(r, c) - m) * (x(r, c) - m);
    v /= n;
    s.mean[c] = m;
    s.scale[c] = v > 0 ? std::sqrt(v) : 0.0;
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c)
      out(r, c) = scale[c] > 0 ? (x(r, c) - mean[c]) / scale[c] : 0.0;
  return out;
}

double LinearModel::decision(std::span<const double> x) const {
  double s = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
  return s;
}

LinearModel fit_l1_linear(const Matrix& x, std::span<const int> y, const L1Options& options) {
  if (x.rows() != y.size()) throw ValidationError("y", "label count differs from row count");
  if (x.rows() == 0) throw ValidationError("x", "no samples");
  for (double v : x.data())
    if (!std::isfinite(v)) throw ValidationError("x", "non-finite value in feature matrix");
  for (int label : y)
    if (label != 0 && label != 1) throw ValidationError("y", "labels must be 0 or 1");

  const std::size_t n = x.rows(), p = x.cols();
  const double lambda = options.lambda;
  LinearModel model;
  model.lambda = lambda;
  model.weights.assign(p, 0.0);

  std::vector<double> z(n), residual(n), grad(p), w_next(p), z_next(n);
  double loss = smooth_loss(x, y, model.weights, model.bias, z);
  double objective = loss + lambda * l1_norm(model.weights);
  model.objective_history.push_back(objective);
  double step = 1.0;

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = (sigmoid(z[i]) - y[i]) / static_cast<double>(n);
    kernels::omp::matvec_transposed(x, residual, grad);
    double grad_b = std::accumulate(residual.begin(), residual.end(), 0.0);

    step = std::min(step * 2.0, 1e6);
    double loss_next = 0, b_next = 0;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t j = 0; j < p; ++j)
        w_next[j] = soft_threshold(model.weights[j] - step * grad[j], step * lambda);
      b_next = model.bias - step * grad_b;
      loss_next = smooth_loss(x, y, w_next, b_next, z_next);
      // Quadratic upper bound of the smooth part around the current point.
      double lin = grad_b * (b_next - model.bias), quad = (b_next - model.bias) * (b_next - model.bias);
      for (std::size_t j = 0; j < p; ++j) {
        double d = w_next[j] - model.weights[j];
        lin += grad[j] * d;
        quad += d * d;
      }
      if (loss_next <= loss + lin + quad / (2.0 * step)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    double objective_next = loss_next + lambda * l1_norm(w_next);
    if (!accepted || objective_next > objective) break;

    model.weights.swap(w_next);
    model.bias = b_next;
    z.swap(z_next);
    loss = loss_next;
    double improvement = objective - objective_next;
    objective = objective_next;
    model.objective_history.push_back(objective);
    model.iterations = it + 1;
    if (improvement < options.tolerance) break;
  }
  model.objective = objective;
  return model;
}

std::size_t rfe_step_size(std::size_t remaining, double step_fraction) noexcept {
  auto step = static_cast<std::size_t>(std::floor(step_fraction * static_cast<double>(remaining)));
  return std::max<std::size_t>(1, step);
}

RfeResult rfe(const Matrix& x, std::span<const int> y, std::span<const Feature> features,
              std::size_t target_count, double step_fraction, const L1Options& options) {
  if (features.size() != x.cols()) throw ValidationError("features", "count differs from matrix columns");
  if (!(step_fraction > 0.0 && step_fraction < 1.0))
    throw ValidationError("step_fraction", "must lie in (0, 1)");
  if (target_count < 1 || target_count > features.size())
    throw ValidationError("target_count", "must lie in [1, number of features]");

  Matrix z = Standardizer::fit(x).transform(x);
  std::vector<std::size_t> remaining(features.size());
  std::iota(remaining.begin(), remaining.end(), 0);

  RfeResult result;
  result.final_model = fit_l1_linear(z.select_columns(remaining), y, options);
  while (remaining.size() > target_count) {
    ++result.rounds;
    const auto& w = result.final_model.weights;
    std::vector<std::size_t> order(remaining.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double wa = std::abs(w[a]), wb = std::abs(w[b]);
      if (wa != wb) return wa < wb;
      return a > b;
    });
    std::size_t drop = std::min(rfe_step_size(remaining.size(), step_fraction), remaining.size() - target_count);
    std::vector<bool> removed(remaining.size(), false);
    for (std::size_t k = 0; k < drop; ++k) {
      removed[order[k]] = true;
      result.eliminated.emplace_back(features[remaining[order[k]]], result.rounds);
    }
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < remaining.size(); ++k)
      if (!removed[k]) kept.push_back(remaining[k]);
    remaining.swap(kept);
    result.final_model = fit_l1_linear(z.select_columns(remaining), y, options);
  }

  result.selected.name = "rfe";
  for (auto idx : remaining) result.selected.features.push_back(features[idx]);
  return result;
}

void write_correlation_csv(std::ostream& out, const CorrelationReport& report) {
  out << "feature,r,reported\n";
  for (const auto& e : report.entries)
    out << feature_id(e.feature) << ',' << format_number(e.r) << ',' << (e.reported ? 1 : 0) << '\n';
  for (auto f : report.undefined) out << feature_id(f) << ",undefined,0\n";
}

void write_correlation_json(std::ostream& out, const CorrelationReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["target"] = std::string(to_string(report.target));
  j["threshold"] = report.threshold;
  auto& entries = j["features"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"feature", std::string(feature_id(e.feature))}, {"r", e.r}, {"reported", e.reported}});
  auto& undefined = j["undefined"] = nlohmann::ordered_json::array();
  for (auto f : report.undefined) undefined.push_back(std::string(feature_id(f)));
  auto& matrix = j["feature_matrix"] = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < report.feature_matrix.rows(); ++a) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < report.feature_matrix.cols(); ++b) row.push_back(json_number(report.feature_matrix(a, b)));
    matrix.push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

namespace {

struct SelectionRow {
  Feature feature;
  bool selected;
  std::size_t round;  // 0 when selected
  double weight;      // final-model weight, 0 for eliminated features
};

std::vector<SelectionRow> selection_rows(const RfeResult& result, std::span<const Feature> features) {
  std::vector<SelectionRow> rows;
  for (auto f : features) {
    SelectionRow row{f, false, 0, 0.0};
    auto sel = std::find(result.selected.features.begin(), result.selected.features.end(), f);
    if (sel != result.selected.features.end()) {
      row.selected = true;
      row.weight = result.final_model.weights[static_cast<std::size_t>(sel - result.selected.features.begin())];
    } else {
      for (const auto& [ef, round] : result.eliminated)
        if (ef == f) row.round = round;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void write_selection_csv(std::ostream& out, const RfeResult& result, std::span<const Feature> features) {
  out << "feature,weight,selected,elimination_round\n";
  for (const auto& r : selection_rows(result, features))
    out << feature_id(r.feature) << ',' << format_number(r.weight) << ',' << (r.selected ? 1 : 0) << ','
        << r.round << '\n';
}

void write_selection_json(std::ostream& out, const RfeResult& result, std::span<const Feature> features) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["rounds"] = result.rounds;
  auto& arr = j["features"] = nlohmann::ordered_json::array();
  for (const auto& r : selection_rows(result, features))
    arr.push_back({{"feature", std::string(feature_id(r.feature))},
                   {"weight", r.weight},
                   {"selected", r.selected},
                   {"elimination_round", r.round}});
  out << j.dump(2) << '\n';
}

}  // namespace wikistream
