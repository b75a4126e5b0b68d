#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "wikistream/matrix.hpp"

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a serial reference kept for tests and the benchmark. Both
// produce bit-identical results: every output element is reduced by a single
// thread in a fixed order.
namespace wikistream::kernels {

inline constexpr std::size_t kFillChunkRows = 1024;

/// Row r of fill_uniform draws column c from
/// [lower(row_interval[r], c), upper(row_interval[r], c)].
struct IntervalBounds {
  const Matrix& lower;
  const Matrix& upper;
};

/// Pearson r of two columns given their means; shared by both variants.
double column_pearson(const Matrix& data, std::size_t a, std::size_t b, double mean_a, double mean_b);

namespace serial {

/// labels[i] = argmin_k |x_i - c_k|^2 (ties toward lower k); dist_sq[i] is that distance.
void assign_nearest(const Matrix& samples, const Matrix& centroids, std::span<std::size_t> labels,
                    std::span<double> dist_sq);
/// Pearson r between every pair of columns; NaN where either column is constant.
Matrix correlation_matrix(const Matrix& data);
/// out_i = bias + sum_j x_ij w_j
void matvec(const Matrix& x, std::span<const double> w, double bias, std::span<double> out);
/// out_j = sum_i x_ij r_i
void matvec_transposed(const Matrix& x, std::span<const double> r, std::span<double> out);
/// Rows are drawn in chunks of kFillChunkRows; chunk q uses substream(seed, q).
void fill_uniform(Matrix& out, std::span<const std::size_t> row_interval, const IntervalBounds& bounds,
                  std::uint64_t seed);

}  // namespace serial

namespace omp {

void assign_nearest(const Matrix& samples, const Matrix& centroids, std::span<std::size_t> labels,
                    std::span<double> dist_sq);
Matrix correlation_matrix(const Matrix& data);
void matvec(const Matrix& x, std::span<const double> w, double bias, std::span<double> out);
void matvec_transposed(const Matrix& x, std::span<const double> r, std::span<double> out);
void fill_uniform(Matrix& out, std::span<const std::size_t> row_interval, const IntervalBounds& bounds,
                  std::uint64_t seed);

}  // namespace omp

}  // namespace wikistream::kernels
