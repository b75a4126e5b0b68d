#include "wikistream/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "wikistream/random.hpp"

namespace wikistream::kernels {

namespace {

std::size_t nearest(std::span<const double> x, const Matrix& centroids, double& best_dist) {
  std::size_t best = 0;
  best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centroids.rows(); ++k) {
    auto c = centroids.row(k);
    double d = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double diff = x[j] - c[j];
      d += diff * diff;
    }
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  return best;
}

std::vector<double> column_means(const Matrix& data) {
  std::vector<double> means(data.cols(), 0.0);
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double s = 0;
    for (std::size_t r = 0; r < data.rows(); ++r) s += data(r, c);
    means[c] = data.rows() ? s / static_cast<double>(data.rows()) : 0.0;
  }
  return means;
}

double row_dot(const Matrix& x, std::size_t i, std::span<const double> w, double bias) {
  auto row = x.row(i);
  double s = bias;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * w[j];
  return s;
}

double column_dot(const Matrix& x, std::size_t j, std::span<const double> r) {
  double s = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, j) * r[i];
  return s;
}

void fill_chunk(Matrix& out, std::span<const std::size_t> row_interval, const IntervalBounds& bounds,
                std::uint64_t seed, std::size_t chunk) {
  Rng rng = substream(seed, chunk);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t begin = chunk * kFillChunkRows;
  std::size_t end = std::min(out.rows(), begin + kFillChunkRows);
  for (std::size_t r = begin; r < end; ++r) {
    std::size_t iv = row_interval[r];
    for (std::size_t c = 0; c < out.cols(); ++c) {
      double lo = bounds.lower(iv, c);
      double hi = bounds.upper(iv, c);
      double u = unit(rng);
      out(r, c) = lo == hi ? lo : std::clamp(lo + (hi - lo) * u, lo, hi);
    }
  }
}

std::size_t chunk_count(std::size_t rows) { return (rows + kFillChunkRows - 1) / kFillChunkRows; }

}  // namespace

double column_pearson(const Matrix& data, std::size_t a, std::size_t b, double mean_a, double mean_b) {
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    double dx = data(r, a) - mean_a;
    double dy = data(r, b) - mean_b;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sxy / (std::sqrt(sxx * syy)), -1.0, 1.0);
}

namespace serial {

void assign_nearest(const Matrix& samples, const Matrix& centroids, std::span<std::size_t> labels,
                    std::span<double> dist_sq) {
  for (std::size_t i = 0; i < samples.rows(); ++i)
    labels[i] = nearest(samples.row(i), centroids, dist_sq[i]);
}

Matrix correlation_matrix(const Matrix& data) {
  auto means = column_means(data);
  Matrix r(data.cols(), data.cols());
  for (std::size_t a = 0; a < data.cols(); ++a)
    for (std::size_t b = a; b < data.cols(); ++b) r(a, b) = r(b, a) = column_pearson(data, a, b, means[a], means[b]);
  return r;
}

void matvec(const Matrix& x, std::span<const double> w, double bias, std::span<double> out) {
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = row_dot(x, i, w, bias);
}

void matvec_transposed(const Matrix& x, std::span<const double> r, std::span<double> out) {
  for (std::size_t j = 0; j < x.cols(); ++j) out[j] = column_dot(x, j, r);
}

void fill_uniform(Matrix& out, std::span<const std::size_t> row_interval, const IntervalBounds& bounds,
                  std::uint64_t seed) {
  for (std::size_t q = 0; q < chunk_count(out.rows()); ++q) fill_chunk(out, row_interval, bounds, seed, q);
}

}  // namespace serial

namespace omp {

void assign_nearest(const Matrix& samples, const Matrix& centroids, std::span<std::size_t> labels,
                    std::span<double> dist_sq) {
  const auto n = static_cast<std::ptrdiff_t>(samples.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    labels[u] = nearest(samples.row(u), centroids, dist_sq[u]);
  }
}

Matrix correlation_matrix(const Matrix& data) {
  auto means = column_means(data);
  const auto p = static_cast<std::ptrdiff_t>(data.cols());
  Matrix r(data.cols(), data.cols());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < p; ++a) {
    for (std::ptrdiff_t b = a; b < p; ++b) {
      auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      r(ua, ub) = r(ub, ua) = column_pearson(data, ua, ub, means[ua], means[ub]);
    }
  }
  return r;
}

void matvec(const Matrix& x, std::span<const double> w, double bias, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = row_dot(x, static_cast<std::size_t>(i), w, bias);
}

void matvec_transposed(const Matrix& x, std::span<const double> r, std::span<double> out) {
  const auto p = static_cast<std::ptrdiff_t>(x.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < p; ++j)
    out[static_cast<std::size_t>(j)] = column_dot(x, static_cast<std::size_t>(j), r);
}

void fill_uniform(Matrix& out, std::span<const std::size_t> row_interval, const IntervalBounds& bounds,
                  std::uint64_t seed) {
  const auto chunks = static_cast<std::ptrdiff_t>(chunk_count(out.rows()));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t q = 0; q < chunks; ++q)
    fill_chunk(out, row_interval, bounds, seed, static_cast<std::size_t>(q));
}

}  // namespace omp

}  // namespace wikistream::kernels
