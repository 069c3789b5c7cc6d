#pragma once

#include "agc/matrix.hpp"
#include "agc/mlp.hpp"

namespace agc {

// Student-t kernel over prototypes:
// q_ik = (1 + ||z_i - mu_k||^2 / nu)^{-(nu+1)/2}, row-normalized.
SoftAssignment student_t_assign(const Embedding& z, const Prototypes& protos,
                                double nu = 1.0);
SoftAssignment student_t_assign(const DenseMatrix<double>& z,
                                const Prototypes& protos, double nu = 1.0);

// Sharpened, frequency-normalized self-training target:
// p_ik = (q_ik^2 / f_k) / sum_k' (q_ik'^2 / f_k'), f_k = sum_i q_ik.
SoftAssignment dec_target(const SoftAssignment& q);

// One-hidden-layer MLP followed by a stabilized row softmax.
SoftAssignment softmax_head_forward(const Embedding& z, const MlpParams& params);

}  // namespace agc
