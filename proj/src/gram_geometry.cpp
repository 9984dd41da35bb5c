#include "isac_fbl/gram_geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isac_fbl {

namespace {

// G = X X^H assembled from a rank update and mirrored from the lower
// triangle, so the result is Hermitian exactly.
Eigen::MatrixXcd gram_of(const Eigen::MatrixXcd& x) {
  const int k = static_cast<int>(x.rows());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(k, k);
  g.selfadjointView<Eigen::Lower>().rankUpdate(x);
  g = g.selfadjointView<Eigen::Lower>();
  return g;
}

Eigen::MatrixXcd normalized_offdiag(const Eigen::MatrixXcd& gram,
                                    double p_bar, int n) {
  Eigen::MatrixXcd delta =
      gram / (static_cast<double>(n) * p_bar) -
      Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  delta.diagonal().setZero();
  return delta;
}

}  // namespace

GeometrySummary summarize_geometry(const ActiveSignal& signal, double p_bar) {
  if (!(p_bar > 0.0))
    throw InvalidSpec("summarize_geometry: p_bar must be > 0");
  const int k = signal.users();
  const int n = signal.uses();
  if (k < 1 || n < 1)
    throw InvalidSpec("summarize_geometry: empty signal");
  if (k > n)
    throw RankDeficient("summarize_geometry: more users than channel uses (k = " +
                        std::to_string(k) + " > n = " + std::to_string(n) + ")");

  GeometrySummary s;
  s.gram = gram_of(signal.matrix);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.gram);
  s.eigenvalues = es.eigenvalues();  // ascending
  const double ev_min = s.eigenvalues(0);
  const double ev_max = s.eigenvalues(k - 1);
  if (!(ev_min > kRankTolerance * ev_max))
    throw RankDeficient(
        "summarize_geometry: Gram matrix numerically rank deficient "
        "(eigenvalue ratio " +
        std::to_string(ev_min / ev_max) + ")");

  Eigen::LLT<Eigen::MatrixXcd> llt(s.gram);
  const Eigen::MatrixXcd inv_cols =
      llt.solve(Eigen::MatrixXcd::Identity(k, k));
  s.trace_inverse = inv_cols.trace().real();
  s.geometry_factor =
      static_cast<double>(n) * p_bar / static_cast<double>(k) * s.trace_inverse;

  double lower = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    double radius = 0.0;
    for (int j = 0; j < k; ++j)
      if (j != i) radius += std::abs(s.gram(i, j));
    lower = std::min(lower, s.gram(i, i).real() - radius);
  }
  s.gershgorin_lower = lower;

  s.neumann_trace =
      static_cast<double>(k) + normalized_offdiag(s.gram, p_bar, n).squaredNorm();
  return s;
}

double gershgorin_min_eig_bound(int k, double rho_max, double p_bar, int n) {
  if (k < 1) throw InvalidSpec("gershgorin_min_eig_bound: k must be >= 1");
  if (n < 1) throw InvalidSpec("gershgorin_min_eig_bound: n must be >= 1");
  if (!(p_bar > 0.0))
    throw InvalidSpec("gershgorin_min_eig_bound: p_bar must be > 0");
  if (!(rho_max >= 0.0) || !(rho_max < 1.0))
    throw InvalidSpec("gershgorin_min_eig_bound: rho_max must be in [0, 1)");
  return static_cast<double>(n) * p_bar * (1.0 - (k - 1) * rho_max);
}

double worst_case_geometry_factor(int k, double rho_max) {
  if (k < 1) throw InvalidSpec("worst_case_geometry_factor: k must be >= 1");
  if (!(rho_max >= 0.0) || !(rho_max < 1.0))
    throw InvalidSpec("worst_case_geometry_factor: rho_max must be in [0, 1)");
  const double margin = 1.0 - (k - 1) * rho_max;
  if (!(margin > 0.0))
    throw WorstCaseSingular(
        "worst_case_geometry_factor: (k - 1) rho_max >= 1, equicorrelated "
        "Gram is singular");
  return 1.0 / margin;
}

double typical_geometry_factor(int k, double rho_max) {
  if (k < 1) throw InvalidSpec("typical_geometry_factor: k must be >= 1");
  if (!(rho_max >= 0.0) || !(rho_max <= 1.0))
    throw InvalidSpec("typical_geometry_factor: rho_max must be in [0, 1]");
  return 1.0 + (k - 1) * rho_max * rho_max;
}

double neumann_trace_approx(const GeometrySummary& summary, double p_bar,
                            int n) {
  if (!(p_bar > 0.0))
    throw InvalidSpec("neumann_trace_approx: p_bar must be > 0");
  if (n < 1) throw InvalidSpec("neumann_trace_approx: n must be >= 1");
  const Eigen::MatrixXcd delta = normalized_offdiag(summary.gram, p_bar, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta,
                                                     Eigen::EigenvaluesOnly);
  const double radius = std::max(std::abs(es.eigenvalues()(0)),
                                 std::abs(es.eigenvalues()(delta.rows() - 1)));
  if (radius >= 1.0)
    throw NeumannDiverges("neumann_trace_approx: spectral radius of delta is " +
                          std::to_string(radius) + " >= 1");
  return summary.neumann_trace / (static_cast<double>(n) * p_bar);
}

}  // namespace isac_fbl
