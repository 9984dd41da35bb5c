#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <numbers>

#include "isac_fbl/errors.hpp"

namespace isac_fbl {

// Parameters of one user's random Gaussian codebook: blocklength n, payload
// b bits (2^b codewords), k active users, per-symbol power budget p_bar.
struct CodebookSpec {
  int n = 0;
  double b = 0.0;
  int k = 0;
  double p_bar = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidSpec on violated constraints. Materialization additionally
  // requires b > 0 and k <= 2^floor(b): one transmitted row per active user.
  void validate(bool materialize = true) const;
};

// One realization of the k active transmitted codewords, stacked as a k x n
// complex matrix (row i = user i's codeword). k > n is representable; rank
// checks happen downstream where a Gram inverse is actually needed.
struct ActiveSignal {
  Eigen::MatrixXcd matrix;

  int users() const { return static_cast<int>(matrix.rows()); }
  int uses() const { return static_cast<int>(matrix.cols()); }
};

// Normalized off-diagonal correlation structure of the realized Gram matrix:
// delta = G / (n p_bar) - I with the diagonal forced to zero. Hermitian by
// construction.
struct CorrelationReport {
  Eigen::MatrixXcd delta;
  double rho_max_empirical = 0.0;
};

// Samples the k active codewords, entries i.i.d. CN(0, p_bar). Row i draws
// from substream i of rng_seed, so individual rows are reproducible
// regardless of how many users are materialized.
ActiveSignal sample_active_codewords(const CodebookSpec& spec,
                                     std::uint64_t rng_seed);

// Closed-form high-probability bound on the maximum pairwise codeword
// correlation among t = 2^b (2^b - 1) / 2 pairs:
//   rho_max = sqrt(ln t / n) + gamma / (2 sqrt(n ln t)).
// gamma defaults to the Euler-Mascheroni constant. Throws DegenerateCodebook
// when t <= 1 (b <= 1), where ln t <= 0 and the expression is meaningless.
double rho_max_closed(double b, int n,
                      double gamma = std::numbers::egamma);

// Leading-order simplification sqrt(2 b ln 2 / n) of rho_max_closed.
double rho_max_approx(double b, int n);

// Exact inverse of rho_max_approx: payload bits that make the approximate
// correlation bound equal rho, i.e. b = n rho^2 / (2 ln 2).
double bits_from_rho(double rho, int n);

// Realized pairwise correlations of a sampled signal. For a single user the
// report is degenerate: a 1x1 zero delta and rho_max_empirical = 0.
CorrelationReport empirical_correlation(const ActiveSignal& signal,
                                        double p_bar);

}  // namespace isac_fbl
