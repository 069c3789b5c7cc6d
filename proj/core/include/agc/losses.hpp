#pragma once

#include "agc/csr_graph.hpp"
#include "agc/matrix.hpp"

namespace agc {

struct DmonLoss {
  double loss = 0.0;            // modularity_term + collapse_term
  double modularity_term = 0.0; // -(1/2m) Tr(C^T B C)
  double collapse_term = 0.0;   // (sqrt(K)/N) ||sum_i C_i|| - 1
};

// Soft modularity loss with collapse regularizer, evaluated sparsely
// (B is never materialized; the i=j null-model diagonal is included).
DmonLoss dmon_loss(const SoftAssignment& c, const CsrGraph& graph);
// dLoss/dC.
DenseMatrix<double> dmon_loss_grad(const SoftAssignment& c, const CsrGraph& graph);

struct MincutLoss {
  double cut_term = 0.0;    // -Tr(C^T A C) / Tr(C^T D C)
  double ortho_term = 0.0;  // || C^T C / ||C^T C||_F - I/sqrt(K) ||_F
  double loss() const { return cut_term + ortho_term; }
};

MincutLoss mincut_loss(const SoftAssignment& c, const CsrGraph& graph);
DenseMatrix<double> mincut_loss_grad(const SoftAssignment& c, const CsrGraph& graph);

// KL(P||Q) summed over nodes, divided by N. 0*ln(0/x) = 0.
double dec_kl_loss(const SoftAssignment& q, const SoftAssignment& p);

// Gradients of dec_kl_loss through the Student-t kernel, with respect to
// the embedding rows and the prototypes.
struct DecGrads {
  DenseMatrix<double> d_z;       // N x H
  DenseMatrix<double> d_protos;  // K x H
};
DecGrads dec_kl_grads(const DenseMatrix<double>& z, const Prototypes& protos,
                      const SoftAssignment& q, const SoftAssignment& p, double nu);

// Chain rule through a row softmax: given dL/dC with C = softmax(logits),
// returns dL/dlogits.
DenseMatrix<double> softmax_backward(const SoftAssignment& c,
                                     const DenseMatrix<double>& d_c);

}  // namespace agc
