#include "agc/mlp.hpp"

#include <cmath>
#include <random>

#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

std::size_t MlpParams::num_params() const {
  return w1.data.size() + b1.size() + w2.data.size() + b2.size();
}

double& MlpParams::param(std::size_t i) {
  if (i < w1.data.size()) return w1.data[i];
  i -= w1.data.size();
  if (i < b1.size()) return b1[i];
  i -= b1.size();
  if (i < w2.data.size()) return w2.data[i];
  i -= w2.data.size();
  return b2[i];
}

double MlpParams::param(std::size_t i) const {
  return const_cast<MlpParams*>(this)->param(i);
}

MlpParams make_mlp(std::size_t in_dim, std::size_t hidden_dim,
                   std::size_t out_dim, std::uint64_t seed) {
  MlpParams p;
  p.w1 = DenseMatrix<double>(in_dim, hidden_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.w2 = DenseMatrix<double>(hidden_dim, out_dim);
  p.b2.assign(out_dim, 0.0);
  std::mt19937_64 rng(seed);
  // Kaiming-uniform fan-in bounds
  const double bound1 = std::sqrt(6.0 / in_dim);
  const double bound2 = std::sqrt(6.0 / hidden_dim);
  std::uniform_real_distribution<double> u1(-bound1, bound1), u2(-bound2, bound2);
  for (auto& v : p.w1.data) v = u1(rng);
  for (auto& v : p.w2.data) v = u2(rng);
  return p;
}

MlpForward mlp_forward(const FeatureMatrix& x, const MlpParams& p) {
  if (x.cols != p.in_dim()) throw ShapeMismatch("mlp_forward: input dim mismatch");
  const std::size_t n = x.rows, d = p.in_dim(), h = p.hidden_dim(), k = p.out_dim();
  MlpForward f;
  f.hidden = DenseMatrix<double>(n, h);
  f.out = DenseMatrix<double>(n, k);
  parallel_for(0, n, [&](std::size_t i, std::size_t) {
    const float* xr = x.row(i);
    double* hr = f.hidden.row(i);
    for (std::size_t j = 0; j < h; ++j) hr[j] = p.b1[j];
    for (std::size_t a = 0; a < d; ++a) {
      const double xv = xr[a];
      if (xv == 0.0) continue;
      const double* wrow = p.w1.row(a);
      for (std::size_t j = 0; j < h; ++j) hr[j] += xv * wrow[j];
    }
    for (std::size_t j = 0; j < h; ++j) hr[j] = hr[j] > 0.0 ? hr[j] : 0.0;
    double* orow = f.out.row(i);
    for (std::size_t c = 0; c < k; ++c) orow[c] = p.b2[c];
    for (std::size_t j = 0; j < h; ++j) {
      const double hv = hr[j];
      if (hv == 0.0) continue;
      const double* wrow = p.w2.row(j);
      for (std::size_t c = 0; c < k; ++c) orow[c] += hv * wrow[c];
    }
  });
  return f;
}

void mlp_backward(const FeatureMatrix& x, const MlpParams& p,
                  const MlpForward& fwd, const DenseMatrix<double>& d_out,
                  MlpParams& grads) {
  const std::size_t n = x.rows, d = p.in_dim(), h = p.hidden_dim(), k = p.out_dim();
  const std::size_t nt = num_threads();
  std::vector<MlpParams> parts(nt);
  for (auto& g : parts) {
    g.w1 = DenseMatrix<double>(d, h);
    g.b1.assign(h, 0.0);
    g.w2 = DenseMatrix<double>(h, k);
    g.b2.assign(k, 0.0);
  }
  parallel_for(0, n, [&](std::size_t i, std::size_t t) {
    MlpParams& g = parts[t];
    const double* go = d_out.row(i);
    const double* hr = fwd.hidden.row(i);
    const float* xr = x.row(i);
    std::vector<double> dh(h, 0.0);
    for (std::size_t j = 0; j < h; ++j) {
      const double hv = hr[j];
      if (hv > 0.0) {
        double* w2g = g.w2.row(j);
        const double* w2r = p.w2.row(j);
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          w2g[c] += hv * go[c];
          acc += w2r[c] * go[c];
        }
        dh[j] = acc;  // ReLU gate: hv > 0
      }
    }
    for (std::size_t c = 0; c < k; ++c) g.b2[c] += go[c];
    for (std::size_t j = 0; j < h; ++j) g.b1[j] += dh[j];
    for (std::size_t a = 0; a < d; ++a) {
      const double xv = xr[a];
      if (xv == 0.0) continue;
      double* w1g = g.w1.row(a);
      for (std::size_t j = 0; j < h; ++j) w1g[j] += xv * dh[j];
    }
  });
  for (std::size_t t = 0; t < nt; ++t) {
    const MlpParams& g = parts[t];
    for (std::size_t i = 0; i < g.w1.data.size(); ++i) grads.w1.data[i] += g.w1.data[i];
    for (std::size_t i = 0; i < g.b1.size(); ++i) grads.b1[i] += g.b1[i];
    for (std::size_t i = 0; i < g.w2.data.size(); ++i) grads.w2.data[i] += g.w2.data[i];
    for (std::size_t i = 0; i < g.b2.size(); ++i) grads.b2[i] += g.b2[i];
  }
}

SoftAssignment row_softmax(const DenseMatrix<double>& logits) {
  SoftAssignment s;
  s.probs = DenseMatrix<double>(logits.rows, logits.cols);
  parallel_for(0, logits.rows, [&](std::size_t i, std::size_t) {
    const double* lr = logits.row(i);
    double* pr = s.probs.row(i);
    double mx = lr[0];
    for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, lr[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.cols; ++j) {
      pr[j] = std::exp(lr[j] - mx);
      sum += pr[j];
    }
    for (std::size_t j = 0; j < logits.cols; ++j) pr[j] /= sum;
  });
  return s;
}

}  // namespace agc
