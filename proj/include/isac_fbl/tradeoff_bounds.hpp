#pragma once

#include <vector>

#include "isac_fbl/ls_sensing.hpp"

namespace isac_fbl {

// One side of the rate-versus-sensing tradeoff at a fixed NMSE target.
// silent means the sensing constraint admits no positive rate (rate = 0).
struct BoundPoint {
  double rho = 0.0;
  double rate = 0.0;
  bool silent = false;
};

// Achievability and converse evaluated at one (e_th, SNR) operating point,
// together with the sensing-free Shannon ceiling.
struct TradeoffPoint {
  double e_th = 0.0;
  double e_min = 0.0;
  double rho_achi = 0.0;
  double rho_conv = 0.0;
  double rate_achi = 0.0;
  double rate_conv = 0.0;
  double shannon_rate = 0.0;
  bool silent_achi = false;
  bool silent_conv = false;
};

// Achievable per-user rate under the NMSE constraint e_th, based on the
// typical-case geometry factor:
//   rho = (1 - e_min / e_th) / (k - 1), clamped to [0, 1];
//   rate = bits_from_rho(rho, n) / n.
// rho <= 0 (e_th <= e_min) yields the silent point. Requires k >= 2.
BoundPoint achievability_point(double e_th, const SystemConfig& cfg);

// Converse per-user rate based on the worst-case geometry factor:
//   rho = sqrt((e_th / e_min - 1) / (k - 1)).
// e_th <= e_min yields the silent point. When the unclamped rho reaches 1
// the sensing constraint stops binding entirely and the converse equals the
// Shannon ceiling (rho is reported clamped to 1); otherwise the rate is
// min(bits_from_rho(rho, n) / n, shannon_per_user). Requires k >= 2.
BoundPoint converse_point(double e_th, const SystemConfig& cfg);

// Per-user Shannon ceiling of the k-user multiple-access channel with m
// receive antennas, continuous across the m = k branch point:
//   m >= k: log2(1 + m sigma_H2 snr)
//   m <  k: (m / k) log2(1 + k sigma_H2 snr).
double shannon_per_user(const SystemConfig& cfg);

// Transmit energy per information bit, n p_bar / (b sigma_n2). Requires
// b > 0.
double energy_per_bit(const SystemConfig& cfg, double bits);

// Both bounds plus the ceiling at one operating point.
TradeoffPoint tradeoff_point(double e_th, const SystemConfig& cfg);

// Full sweep over an SNR grid (outer) and an e_th grid (inner), both
// required non-empty and sorted ascending. p_bar is re-derived from each
// grid SNR through with_snr_db.
std::vector<TradeoffPoint> tradeoff_sweep(const SystemConfig& base,
                                          const std::vector<double>& e_th_grid,
                                          const std::vector<double>& snr_db_grid);

}  // namespace isac_fbl
