#pragma once

#include <Eigen/Dense>

#include "isac_fbl/codebook.hpp"
#include "isac_fbl/errors.hpp"

namespace isac_fbl {

// A Gram matrix whose smallest eigenvalue falls at or below this fraction of
// the largest is treated as numerically rank deficient.
inline constexpr double kRankTolerance = 1e-10;

// Spectral and conditioning summary of the realized Gram matrix G = X X^H.
struct GeometrySummary {
  Eigen::MatrixXcd gram;        // k x k, Hermitian positive definite
  Eigen::VectorXd eigenvalues;  // ascending
  double trace_inverse = 0.0;   // tr(G^{-1}), via Cholesky solves
  double geometry_factor = 0.0;  // (n p_bar / k) tr(G^{-1}), >= 1 iff G PD
  double gershgorin_lower = 0.0;  // min_i (G_ii - sum_{j != i} |G_ij|)
  double neumann_trace = 0.0;     // k + ||delta||_F^2
};

// Computes the summary. Requires k <= n and a numerically full-rank signal;
// throws RankDeficient otherwise (tolerance kRankTolerance). gershgorin_lower
// is the Gershgorin circle bound of the realized Gram, guaranteed <=
// eigenvalues[0] for every Hermitian input; it equals
// n p_bar (1 - max_i sum_{j != i} |delta_ij|) whenever the realized row
// energies hit the nominal value n p_bar exactly.
GeometrySummary summarize_geometry(const ActiveSignal& signal, double p_bar);

// Analytic worst-case Gershgorin bound n p_bar (1 - (k - 1) rho_max) under
// the assumption that every pairwise correlation saturates rho_max. May be
// negative, in which case it carries no information.
double gershgorin_min_eig_bound(int k, double rho_max, double p_bar, int n);

// Worst-case geometry factor 1 / (1 - (k - 1) rho_max), the equicorrelated
// extreme. Throws WorstCaseSingular when (k - 1) rho_max >= 1, where the
// worst-case Gram loses rank.
double worst_case_geometry_factor(int k, double rho_max);

// Typical-case geometry factor 1 + (k - 1) rho_max^2, the second-order
// Neumann prediction when off-diagonal correlations have magnitude rho_max
// but random phases.
double typical_geometry_factor(int k, double rho_max);

// Second-order Neumann approximation of tr(G^{-1}):
//   (k + ||delta||_F^2) / (n p_bar),  delta = G / (n p_bar) - I.
// Throws NeumannDiverges when the spectral radius of delta is >= 1 and the
// underlying series does not converge.
double neumann_trace_approx(const GeometrySummary& summary, double p_bar,
                            int n);

}  // namespace isac_fbl
