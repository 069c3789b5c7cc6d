#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "agc/errors.hpp"

namespace agc {

// Dense row-major matrix. float for stored features/embeddings,
// double for assignment probabilities and model parameters.
template <typename T>
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, T fill = T{})
      : rows(r), cols(c), data(r * c, fill) {}

  T* row(std::size_t i) { return data.data() + i * cols; }
  const T* row(std::size_t i) const { return data.data() + i * cols; }
  std::span<T> row_span(std::size_t i) { return {row(i), cols}; }
  std::span<const T> row_span(std::size_t i) const { return {row(i), cols}; }

  T& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool same_shape(const DenseMatrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

using FeatureMatrix = DenseMatrix<float>;
using Embedding = DenseMatrix<float>;

// Rows on the simplex (sum 1 within 1e-5).
struct SoftAssignment {
  DenseMatrix<double> probs;
  std::size_t n() const { return probs.rows; }
  std::size_t k() const { return probs.cols; }
};

struct HardAssignment {
  std::vector<std::uint32_t> labels;
  std::uint32_t k = 0;
};

// K x H cluster centroids.
struct Prototypes {
  DenseMatrix<double> centers;
  std::size_t k() const { return centers.rows; }
  std::size_t dim() const { return centers.cols; }
};

inline HardAssignment argmax_rows(const SoftAssignment& soft) {
  HardAssignment hard;
  hard.k = static_cast<std::uint32_t>(soft.k());
  hard.labels.resize(soft.n());
  for (std::size_t i = 0; i < soft.n(); ++i) {
    const double* p = soft.probs.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < soft.k(); ++j) {
      if (p[j] > p[best]) best = j;  // ties: lowest index wins
    }
    hard.labels[i] = static_cast<std::uint32_t>(best);
  }
  return hard;
}

}  // namespace agc
