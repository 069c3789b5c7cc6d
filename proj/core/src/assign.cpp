#include "agc/assign.hpp"

#include <cmath>
#include <string>

#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

namespace {

template <typename Scalar>
SoftAssignment student_t_impl(const DenseMatrix<Scalar>& z, const Prototypes& protos,
                              double nu) {
  if (z.cols != protos.dim()) throw ShapeMismatch("student_t_assign: dimension mismatch");
  if (!(nu > 0.0)) throw InvalidConfig("student_t_assign: nu must be > 0");
  const std::size_t n = z.rows, d = z.cols, k = protos.k();
  const double expo = -(nu + 1.0) / 2.0;
  SoftAssignment q;
  q.probs = DenseMatrix<double>(n, k);
  parallel_for(0, n, [&](std::size_t i, std::size_t) {
    const Scalar* zr = z.row(i);
    double* qr = q.probs.row(i);
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double* mu = protos.centers.row(c);
      double d2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = zr[j] - mu[j];
        d2 += diff * diff;
      }
      qr[c] = std::pow(1.0 + d2 / nu, expo);
      sum += qr[c];
    }
    for (std::size_t c = 0; c < k; ++c) qr[c] /= sum;
  });
  return q;
}

}  // namespace

SoftAssignment student_t_assign(const Embedding& z, const Prototypes& protos, double nu) {
  return student_t_impl(z, protos, nu);
}

SoftAssignment student_t_assign(const DenseMatrix<double>& z, const Prototypes& protos,
                                double nu) {
  return student_t_impl(z, protos, nu);
}

SoftAssignment dec_target(const SoftAssignment& q) {
  const std::size_t n = q.n(), k = q.k();
  std::vector<double> freq(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* qr = q.probs.row(i);
    for (std::size_t c = 0; c < k; ++c) freq[c] += qr[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (freq[c] <= 0.0) {
      throw EmptyClusterTarget("dec_target: cluster " + std::to_string(c) +
                               " has zero soft frequency");
    }
  }
  SoftAssignment p;
  p.probs = DenseMatrix<double>(n, k);
  parallel_for(0, n, [&](std::size_t i, std::size_t) {
    const double* qr = q.probs.row(i);
    double* pr = p.probs.row(i);
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      pr[c] = qr[c] * qr[c] / freq[c];
      sum += pr[c];
    }
    for (std::size_t c = 0; c < k; ++c) pr[c] /= sum;
  });
  return p;
}

SoftAssignment softmax_head_forward(const Embedding& z, const MlpParams& params) {
  MlpForward f = mlp_forward(z, params);
  return row_softmax(f.out);
}

}  // namespace agc
