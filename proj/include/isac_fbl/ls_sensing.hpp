#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "isac_fbl/codebook.hpp"
#include "isac_fbl/gram_geometry.hpp"

namespace isac_fbl {

// Scalar system parameters shared by the sensing and communication bounds:
// blocklength n, active users k, receive antennas m, per-symbol power p_bar,
// noise variance sigma_n2, channel-coefficient variance sigma_H2.
struct SystemConfig {
  int n = 0;
  int k = 0;
  int m = 0;
  double p_bar = 0.0;
  double sigma_n2 = 0.0;
  double sigma_H2 = 0.0;

  double snr() const { return p_bar / sigma_n2; }
  double snr_db() const;

  void validate() const;  // throws InvalidSpec
};

// Copy of `base` with p_bar chosen so that p_bar / sigma_n2 equals the given
// SNR in dB. Keeping p_bar as the stored quantity makes snr_db consistent by
// construction.
SystemConfig with_snr_db(SystemConfig base, double snr_db);

// Noise-floor NMSE of the least-squares channel estimate under orthogonal
// codewords: sigma_n2 / (n p_bar sigma_H2).
double minimum_nmse(const SystemConfig& cfg);

// NMSE of the least-squares estimate split into the orthogonal-codebook
// floor and the excess caused by codeword correlation.
struct NmseBreakdown {
  double e_min = 0.0;
  double geometry_factor = 0.0;
  double nmse_analytic = 0.0;  // e_min * geometry_factor
  std::optional<double> nmse_empirical;
  std::optional<long> trials;
};

// Least-squares channel estimate H_hat = Y X^H G^{-1} for received samples
// Y (m x n) and transmitted signal X (k x n). Solved through the Cholesky
// factorization of G; no inverse is formed. Throws RankDeficient when the
// Gram matrix fails the rank tolerance, InvalidSpec on shape mismatch.
Eigen::MatrixXcd ls_estimate(const Eigen::MatrixXcd& received,
                             const ActiveSignal& signal);

// Analytic NMSE E||H_hat - H||^2 / E||H||^2 = e_min * geometry_factor for
// the realized geometry.
NmseBreakdown analytic_nmse(const SystemConfig& cfg,
                            const GeometrySummary& summary);

// Monte Carlo verification of analytic_nmse over i.i.d. draws of the channel
// H ~ CN(0, sigma_H2) and noise N ~ CN(0, sigma_n2) with the signal held
// fixed. Trial t draws from substream t of `seed` (H first, then N, both
// column-major), and the estimator pools numerator and denominator across
// trials:
//   nmse_empirical = sum_t ||H_hat_t - H_t||^2 / sum_t ||H_t||^2,
// accumulated in trial order, so results are bitwise reproducible for any
// thread count. When fixed_channel is non-null the channel is held at that
// value in every trial instead of being redrawn (debugging aid; the noise
// substream layout is unchanged).
NmseBreakdown monte_carlo_nmse(const SystemConfig& cfg,
                               const ActiveSignal& signal, long trials,
                               std::uint64_t seed, int threads = 1,
                               const Eigen::MatrixXcd* fixed_channel = nullptr);

}  // namespace isac_fbl
