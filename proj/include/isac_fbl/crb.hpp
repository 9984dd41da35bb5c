#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isac_fbl/errors.hpp"

namespace isac_fbl {

// Block-diagonal Jacobian of the stacked channel matrix with respect to the
// sensing parameters. User i contributes an m x q_i block B_i whose column c
// is the derivative of user i's channel column (length m) with respect to
// that user's c-th parameter; cross-user derivatives vanish because each
// column of H depends on its own user's parameters only.
struct JacobianMatrix {
  int antennas = 0;                      // m, rows of every block
  std::vector<Eigen::MatrixXcd> blocks;  // one m x q_i block per user

  int users() const { return static_cast<int>(blocks.size()); }
  int total_params() const;              // q = sum_i q_i
  std::vector<int> offsets() const;      // parameter column offset per user

  // Dense mk x q layout with zero cross-user blocks, rows stacked user-major
  // (user i occupies rows [i m, (i+1) m)). Matches the column-stacking
  // convention vec(H) used by the covariance identity below.
  Eigen::MatrixXcd dense() const;
};

// CRB of the joint sensing-parameter estimate.
struct CrbResult {
  Eigen::MatrixXd fim;            // q x q, real symmetric PSD
  double crb_trace = 0.0;         // tr(F^{-1})
  Eigen::VectorXd per_parameter;  // diag(F^{-1})
};

// Fisher information of the sensing parameters for the least-squares channel
// observation model. With vec stacking columns of H, the LS estimate is
// Gaussian with covariance C = sigma_n2 (conj(G)^{-1} kron I_m), so
//   F = (2 / sigma_n2) Re{ J^H (conj(G) kron I_m) J },
// which the block-diagonal structure of J collapses to
//   F(a, b) = (2 / sigma_n2) Re{ conj(G_ab) B_a^H B_b }   (q_a x q_b block).
// Only the blockwise form is evaluated; the Kronecker product is never
// materialized. Throws SingularGram when G is not positive definite,
// InvalidSpec on shape mismatch.
Eigen::MatrixXd fisher_information(const JacobianMatrix& jacobian,
                                   const Eigen::MatrixXcd& gram,
                                   double sigma_n2);

// tr(F^{-1}) and diag(F^{-1}) via the symmetric eigendecomposition of F.
// Eigenvalues at or below 1e-12 times the largest mark the FIM as singular:
// by default that throws SingularFim; with pseudo_inverse = true those
// directions are dropped and the pseudo-inverse trace is returned instead.
CrbResult crb_trace(const JacobianMatrix& jacobian,
                    const Eigen::MatrixXcd& gram, double sigma_n2,
                    bool pseudo_inverse = false);

}  // namespace isac_fbl
