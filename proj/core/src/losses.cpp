#include "agc/losses.hpp"

#include <cmath>
#include <vector>

#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

namespace {

void check_shapes(const SoftAssignment& c, const CsrGraph& graph, const char* op) {
  if (c.n() != graph.num_nodes) {
    throw ShapeMismatch(std::string(op) + ": assignment rows != num_nodes");
  }
}

// sum over ordered arcs (u,v) of C_u . C_v, deterministic merge order.
double edge_quadratic(const SoftAssignment& c, const CsrGraph& graph) {
  const std::size_t k = c.k();
  const std::size_t nt = num_threads();
  std::vector<double> part(nt, 0.0);
  parallel_for(0, graph.num_nodes, [&](std::size_t u, std::size_t t) {
    const double* cu = c.probs.row(u);
    double acc = 0.0;
    for (std::uint64_t v : graph.neighbors(u)) {
      const double* cv = c.probs.row(v);
      for (std::size_t j = 0; j < k; ++j) acc += cu[j] * cv[j];
    }
    part[t] += acc;
  });
  double sum = 0.0;
  for (double p : part) sum += p;
  return sum;
}

// For every u: out_u = sum_{v in N(u)} C_v.
DenseMatrix<double> neighbor_sums(const SoftAssignment& c, const CsrGraph& graph) {
  const std::size_t k = c.k();
  DenseMatrix<double> out(graph.num_nodes, k);
  parallel_for(0, graph.num_nodes, [&](std::size_t u, std::size_t) {
    double* o = out.row(u);
    for (std::uint64_t v : graph.neighbors(u)) {
      const double* cv = c.probs.row(v);
      for (std::size_t j = 0; j < k; ++j) o[j] += cv[j];
    }
  });
  return out;
}

std::vector<double> degree_weighted_colsum(const SoftAssignment& c, const CsrGraph& graph) {
  std::vector<double> vol(c.k(), 0.0);
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double d = static_cast<double>(graph.degrees[i]);
    if (d == 0.0) continue;
    const double* ci = c.probs.row(i);
    for (std::size_t j = 0; j < c.k(); ++j) vol[j] += d * ci[j];
  }
  return vol;
}

std::vector<double> colsum(const SoftAssignment& c) {
  std::vector<double> s(c.k(), 0.0);
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double* ci = c.probs.row(i);
    for (std::size_t j = 0; j < c.k(); ++j) s[j] += ci[j];
  }
  return s;
}

}  // namespace

DmonLoss dmon_loss(const SoftAssignment& c, const CsrGraph& graph) {
  check_shapes(c, graph, "dmon_loss");
  const double two_m = static_cast<double>(graph.col_idx.size());
  if (two_m == 0.0) throw EmptyGraph("dmon_loss: graph has no edges");

  const double edge_sum = edge_quadratic(c, graph);
  const auto vol = degree_weighted_colsum(c, graph);
  double vol2 = 0.0;
  for (double v : vol) vol2 += v * v;

  DmonLoss out;
  out.modularity_term = -(edge_sum - vol2 / two_m) / two_m;

  const auto cs = colsum(c);
  double cs_norm = 0.0;
  for (double v : cs) cs_norm += v * v;
  cs_norm = std::sqrt(cs_norm);
  out.collapse_term =
      std::sqrt(static_cast<double>(c.k())) / static_cast<double>(c.n()) * cs_norm - 1.0;
  out.loss = out.modularity_term + out.collapse_term;
  return out;
}

DenseMatrix<double> dmon_loss_grad(const SoftAssignment& c, const CsrGraph& graph) {
  check_shapes(c, graph, "dmon_loss_grad");
  const double two_m = static_cast<double>(graph.col_idx.size());
  if (two_m == 0.0) throw EmptyGraph("dmon_loss_grad: graph has no edges");
  const std::size_t k = c.k();

  DenseMatrix<double> nsum = neighbor_sums(c, graph);
  const auto vol = degree_weighted_colsum(c, graph);
  auto cs = colsum(c);
  double cs_norm = 0.0;
  for (double v : cs) cs_norm += v * v;
  cs_norm = std::sqrt(cs_norm);
  const double collapse_scale =
      cs_norm > 0.0
          ? std::sqrt(static_cast<double>(k)) / (static_cast<double>(c.n()) * cs_norm)
          : 0.0;

  DenseMatrix<double> grad(c.n(), k);
  parallel_for(0, c.n(), [&](std::size_t u, std::size_t) {
    const double du = static_cast<double>(graph.degrees[u]);
    const double* ns = nsum.row(u);
    double* g = grad.row(u);
    for (std::size_t j = 0; j < k; ++j) {
      g[j] = -2.0 * ns[j] / two_m + 2.0 * du * vol[j] / (two_m * two_m) +
             collapse_scale * cs[j];
    }
  });
  return grad;
}

MincutLoss mincut_loss(const SoftAssignment& c, const CsrGraph& graph) {
  check_shapes(c, graph, "mincut_loss");
  const std::size_t k = c.k();

  const double num = edge_quadratic(c, graph);
  double den = 0.0;
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double d = static_cast<double>(graph.degrees[i]);
    if (d == 0.0) continue;
    const double* ci = c.probs.row(i);
    double n2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) n2 += ci[j] * ci[j];
    den += d * n2;
  }
  if (den == 0.0) throw DegenerateDenominator("mincut_loss: Tr(C^T D C) = 0");

  // M = C^T C
  DenseMatrix<double> m(k, k);
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double* ci = c.probs.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) m.at(a, b) += ci[a] * ci[b];
    }
  }
  double fn = 0.0;
  for (double v : m.data) fn += v * v;
  fn = std::sqrt(fn);
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(k));
  double g2 = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double gg = m.at(a, b) / fn - (a == b ? inv_sqrt_k : 0.0);
      g2 += gg * gg;
    }
  }

  MincutLoss out;
  out.cut_term = -num / den;
  out.ortho_term = std::sqrt(g2);
  return out;
}

DenseMatrix<double> mincut_loss_grad(const SoftAssignment& c, const CsrGraph& graph) {
  check_shapes(c, graph, "mincut_loss_grad");
  const std::size_t k = c.k();

  const double num = edge_quadratic(c, graph);
  double den = 0.0;
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double d = static_cast<double>(graph.degrees[i]);
    if (d == 0.0) continue;
    const double* ci = c.probs.row(i);
    double n2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) n2 += ci[j] * ci[j];
    den += d * n2;
  }
  if (den == 0.0) throw DegenerateDenominator("mincut_loss_grad: Tr(C^T D C) = 0");

  DenseMatrix<double> m(k, k);
  for (std::size_t i = 0; i < c.n(); ++i) {
    const double* ci = c.probs.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) m.at(a, b) += ci[a] * ci[b];
    }
  }
  double fn = 0.0;
  for (double v : m.data) fn += v * v;
  fn = std::sqrt(fn);
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(k));
  DenseMatrix<double> gmat(k, k);
  double g_norm = 0.0, gm_dot = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double gg = m.at(a, b) / fn - (a == b ? inv_sqrt_k : 0.0);
      gmat.at(a, b) = gg;
      g_norm += gg * gg;
      gm_dot += gg * m.at(a, b);
    }
  }
  g_norm = std::sqrt(g_norm);

  // d ortho / dM; zero exactly at ortho = 0 (already the target)
  DenseMatrix<double> dm(k, k);
  if (g_norm > 0.0) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        dm.at(a, b) =
            (gmat.at(a, b) / fn - gm_dot * m.at(a, b) / (fn * fn * fn)) / g_norm;
      }
    }
  }

  DenseMatrix<double> nsum = neighbor_sums(c, graph);
  DenseMatrix<double> grad(c.n(), k);
  parallel_for(0, c.n(), [&](std::size_t u, std::size_t) {
    const double du = static_cast<double>(graph.degrees[u]);
    const double* ns = nsum.row(u);
    const double* cu = c.probs.row(u);
    double* g = grad.row(u);
    for (std::size_t j = 0; j < k; ++j) {
      // quotient rule for -num/den
      g[j] = -(2.0 * ns[j] * den - num * 2.0 * du * cu[j]) / (den * den);
    }
    // ortho: dL/dC_u = 2 * (dL/dM) C_u
    for (std::size_t a = 0; a < k; ++a) {
      double acc = 0.0;
      const double* dma = dm.row(a);
      for (std::size_t b = 0; b < k; ++b) acc += dma[b] * cu[b];
      g[a] += 2.0 * acc;
    }
  });
  return grad;
}

double dec_kl_loss(const SoftAssignment& q, const SoftAssignment& p) {
  if (q.n() != p.n() || q.k() != p.k()) {
    throw ShapeMismatch("dec_kl_loss: shape mismatch between q and p");
  }
  const std::size_t n = q.n(), k = q.k();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* qr = q.probs.row(i);
    const double* pr = p.probs.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      if (pr[j] <= 0.0) continue;
      if (qr[j] <= 0.0) {
        throw InfiniteDivergence("dec_kl_loss: q=0 where p>0");
      }
      sum += pr[j] * std::log(pr[j] / qr[j]);
    }
  }
  return sum / static_cast<double>(n);
}

DecGrads dec_kl_grads(const DenseMatrix<double>& z, const Prototypes& protos,
                      const SoftAssignment& q, const SoftAssignment& p, double nu) {
  const std::size_t n = z.rows, d = z.cols, k = protos.k();
  const double expo = (nu + 1.0) / 2.0;
  DecGrads out;
  out.d_z = DenseMatrix<double>(n, d);
  out.d_protos = DenseMatrix<double>(k, d);

  const std::size_t nt = num_threads();
  std::vector<DenseMatrix<double>> proto_parts(nt, DenseMatrix<double>(k, d));
  parallel_for(0, n, [&](std::size_t i, std::size_t t) {
    const double* zr = z.row(i);
    const double* qr = q.probs.row(i);
    const double* pr = p.probs.row(i);
    double* dz = out.d_z.row(i);
    DenseMatrix<double>& dp = proto_parts[t];

    // dL/dq_ik = -(1/N) p/q; through row normalization of the kernel:
    // dL/ds_il = (dL/dq_il - sum_k dL/dq_ik q_ik) / S_i, and since
    // q = s/S only the combination matters; fold 1/S into the kernel.
    std::vector<double> dldq(k);
    double dot = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      dldq[c] = qr[c] > 0.0 ? -pr[c] / (qr[c] * static_cast<double>(n)) : 0.0;
      dot += dldq[c] * qr[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double* mu = protos.centers.row(c);
      double d2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = zr[j] - mu[j];
        d2 += diff * diff;
      }
      const double base = 1.0 + d2 / nu;
      // dq_il/d(d2) summed into the chain: (dL/dq - dot) * q * (-e/nu) / base
      const double coeff = (dldq[c] - dot) * qr[c] * (-expo / nu) / base;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = zr[j] - mu[j];
        dz[j] += coeff * 2.0 * diff;
        dp.at(c, j) -= coeff * 2.0 * diff;
      }
    }
  });
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t i = 0; i < out.d_protos.data.size(); ++i) {
      out.d_protos.data[i] += proto_parts[t].data[i];
    }
  }
  return out;
}

DenseMatrix<double> softmax_backward(const SoftAssignment& c,
                                     const DenseMatrix<double>& d_c) {
  const std::size_t n = c.n(), k = c.k();
  DenseMatrix<double> d_logits(n, k);
  parallel_for(0, n, [&](std::size_t i, std::size_t) {
    const double* cr = c.probs.row(i);
    const double* g = d_c.row(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot += g[j] * cr[j];
    double* o = d_logits.row(i);
    for (std::size_t j = 0; j < k; ++j) o[j] = cr[j] * (g[j] - dot);
  });
  return d_logits;
}

}  // namespace agc
