#pragma once

#include <cstdint>
#include <vector>

#include "agc/matrix.hpp"

namespace agc {

// One-hidden-layer MLP, ReLU hidden activation. Parameters are kept in
// double so analytic gradients can be checked against 64-bit finite
// differences.
struct MlpParams {
  DenseMatrix<double> w1;  // D x H
  std::vector<double> b1;  // H
  DenseMatrix<double> w2;  // H x K
  std::vector<double> b2;  // K

  std::size_t in_dim() const { return w1.rows; }
  std::size_t hidden_dim() const { return w1.cols; }
  std::size_t out_dim() const { return w2.cols; }

  // Flat views used by the optimizer and finite-difference harness.
  std::size_t num_params() const;
  double& param(std::size_t i);
  double param(std::size_t i) const;
};

MlpParams make_mlp(std::size_t in_dim, std::size_t hidden_dim,
                   std::size_t out_dim, std::uint64_t seed);

struct MlpForward {
  DenseMatrix<double> hidden;  // N x H, post-ReLU
  DenseMatrix<double> out;     // N x K, raw outputs (logits or embedding)
};

MlpForward mlp_forward(const FeatureMatrix& x, const MlpParams& p);

// Reverse pass: given dLoss/d(out), accumulates parameter gradients.
// grads must be shape-matched and zeroed by the caller.
void mlp_backward(const FeatureMatrix& x, const MlpParams& p,
                  const MlpForward& fwd, const DenseMatrix<double>& d_out,
                  MlpParams& grads);

// Row softmax with max-subtraction.
SoftAssignment row_softmax(const DenseMatrix<double>& logits);

}  // namespace agc
