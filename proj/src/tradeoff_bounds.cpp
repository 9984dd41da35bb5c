#include "isac_fbl/tradeoff_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isac_fbl/codebook.hpp"
#include "isac_fbl/errors.hpp"

namespace isac_fbl {

namespace {

void require_multiuser(const SystemConfig& cfg, const char* who) {
  cfg.validate();
  if (cfg.k < 2)
    throw InvalidSpec(std::string(who) + ": bounds need k >= 2");
}

void require_threshold(double e_th, const char* who) {
  if (!std::isfinite(e_th) || e_th <= 0.0)
    throw InvalidSpec(std::string(who) + ": e_th must be finite and > 0");
}

void require_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty())
    throw InvalidSpec(std::string("tradeoff_sweep: empty grid ") + name);
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw InvalidSpec(std::string("tradeoff_sweep: grid ") + name +
                      " must be sorted ascending");
}

}  // namespace

BoundPoint achievability_point(double e_th, const SystemConfig& cfg) {
  require_multiuser(cfg, "achievability_point");
  require_threshold(e_th, "achievability_point");
  const double e_min = minimum_nmse(cfg);
  // correlation budget from the typical-case geometry factor
  double rho = (1.0 - e_min / e_th) / (cfg.k - 1);
  if (rho <= 0.0) return {0.0, 0.0, true};
  rho = std::min(rho, 1.0);
  return {rho, bits_from_rho(rho, cfg.n) / cfg.n, false};
}

BoundPoint converse_point(double e_th, const SystemConfig& cfg) {
  require_multiuser(cfg, "converse_point");
  require_threshold(e_th, "converse_point");
  const double e_min = minimum_nmse(cfg);
  if (e_th <= e_min) return {0.0, 0.0, true};
  const double ceiling = shannon_per_user(cfg);
  // correlation budget from the worst-case geometry factor
  const double rho = std::sqrt((e_th / e_min - 1.0) / (cfg.k - 1));
  if (rho >= 1.0) {
    // even fully-correlated codewords meet the NMSE target: the sensing
    // constraint is vacuous and only the Shannon ceiling binds
    return {1.0, ceiling, false};
  }
  return {rho, std::min(bits_from_rho(rho, cfg.n) / cfg.n, ceiling), false};
}

double shannon_per_user(const SystemConfig& cfg) {
  cfg.validate();
  const double gain = cfg.sigma_H2 * cfg.snr();
  if (cfg.m >= cfg.k) return std::log2(1.0 + cfg.m * gain);
  return static_cast<double>(cfg.m) / cfg.k * std::log2(1.0 + cfg.k * gain);
}

double energy_per_bit(const SystemConfig& cfg, double bits) {
  cfg.validate();
  if (!std::isfinite(bits) || bits <= 0.0)
    throw InvalidSpec("energy_per_bit: bits must be finite and > 0");
  return static_cast<double>(cfg.n) * cfg.p_bar / (bits * cfg.sigma_n2);
}

TradeoffPoint tradeoff_point(double e_th, const SystemConfig& cfg) {
  const BoundPoint achi = achievability_point(e_th, cfg);
  const BoundPoint conv = converse_point(e_th, cfg);
  TradeoffPoint p;
  p.e_th = e_th;
  p.e_min = minimum_nmse(cfg);
  p.rho_achi = achi.rho;
  p.rho_conv = conv.rho;
  p.rate_achi = achi.rate;
  p.rate_conv = conv.rate;
  p.shannon_rate = shannon_per_user(cfg);
  p.silent_achi = achi.silent;
  p.silent_conv = conv.silent;
  return p;
}

std::vector<TradeoffPoint> tradeoff_sweep(
    const SystemConfig& base, const std::vector<double>& e_th_grid,
    const std::vector<double>& snr_db_grid) {
  require_multiuser(base, "tradeoff_sweep");
  require_grid(e_th_grid, "e_th");
  require_grid(snr_db_grid, "snr_db");

  std::vector<TradeoffPoint> points;
  points.reserve(e_th_grid.size() * snr_db_grid.size());
  for (const double snr_db : snr_db_grid) {
    const SystemConfig cfg = with_snr_db(base, snr_db);
    for (const double e_th : e_th_grid)
      points.push_back(tradeoff_point(e_th, cfg));
  }
  return points;
}

}  // namespace isac_fbl
