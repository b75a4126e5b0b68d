#include <cstring>
#include <random>

#include "doctest.h"
#include "wikistream/kernels.hpp"

using namespace wikistream;
namespace k = wikistream::kernels;

namespace {

Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n(0, 3);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = n(rng);
  return m;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("nearest-centroid assignment matches the serial reference") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    auto samples = random_matrix(rng, 500 + 97 * trial, 7);
    auto centroids = random_matrix(rng, 1 + trial % 6, 7);
    std::vector<std::size_t> la(samples.rows()), lb(samples.rows());
    std::vector<double> da(samples.rows()), db(samples.rows());
    k::serial::assign_nearest(samples, centroids, la, da);
    k::omp::assign_nearest(samples, centroids, lb, db);
    CHECK(la == lb);
    CHECK(same_bits(da, db));
  }
}

TEST_CASE("assignment picks the closest centroid, lower index on ties") {
  Matrix samples(3, 1);
  samples(0, 0) = 0;
  samples(1, 0) = 1;
  samples(2, 0) = 4;
  Matrix centroids(2, 1);
  centroids(0, 0) = 0;
  centroids(1, 0) = 2;
  std::vector<std::size_t> labels(3);
  std::vector<double> dist(3);
  k::serial::assign_nearest(samples, centroids, labels, dist);
  CHECK(labels == std::vector<std::size_t>{0, 0, 1});
  CHECK(dist == std::vector<double>{0, 1, 4});
}

TEST_CASE("correlation matrix matches the serial reference") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    auto data = random_matrix(rng, 300 + 50 * trial, 9);
    for (std::size_t r = 0; r < data.rows(); ++r) data(r, 4) = 1.5;  // constant column
    auto a = k::serial::correlation_matrix(data);
    auto b = k::omp::correlation_matrix(data);
    CHECK(same_bits(a.data(), b.data()));
    CHECK(std::isnan(a(4, 0)));
    CHECK(a(0, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("matrix-vector products match the serial reference") {
  std::mt19937 rng(3);
  auto x = random_matrix(rng, 2049, 13);
  std::vector<double> w(13);
  for (auto& v : w) v = std::uniform_real_distribution<double>(-1, 1)(rng);
  std::vector<double> a(x.rows()), b(x.rows());
  k::serial::matvec(x, w, 0.25, a);
  k::omp::matvec(x, w, 0.25, b);
  CHECK(same_bits(a, b));
  std::vector<double> ta(13), tb(13);
  k::serial::matvec_transposed(x, a, ta);
  k::omp::matvec_transposed(x, a, tb);
  CHECK(same_bits(ta, tb));
}

TEST_CASE("chunked uniform fill matches the serial reference and respects bounds") {
  const std::size_t rows = 5 * k::kFillChunkRows + 17;
  Matrix lower(4, 3), upper(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t c = 0; c < 3; ++c) {
      lower(i, c) = static_cast<double>(i) - static_cast<double>(c);
      upper(i, c) = lower(i, c) + 0.5 + static_cast<double>(c);
    }
  std::vector<std::size_t> interval(rows);
  for (std::size_t r = 0; r < rows; ++r) interval[r] = (r * 7) % 4;
  Matrix a(rows, 3), b(rows, 3);
  k::serial::fill_uniform(a, interval, {lower, upper}, 42);
  k::omp::fill_uniform(b, interval, {lower, upper}, 42);
  CHECK(same_bits(a.data(), b.data()));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(a(r, c) >= lower(interval[r], c));
      CHECK(a(r, c) <= upper(interval[r], c));
    }
  Matrix c(rows, 3);
  k::serial::fill_uniform(c, interval, {lower, upper}, 43);
  CHECK_FALSE(c == a);
}
