#include "isac_fbl/ls_sensing.hpp"

#include <Eigen/Cholesky>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "isac_fbl/parallel.hpp"
#include "isac_fbl/rng.hpp"

namespace isac_fbl {

double SystemConfig::snr_db() const { return 10.0 * std::log10(snr()); }

void SystemConfig::validate() const {
  if (n < 1) throw InvalidSpec("system: n must be >= 1");
  if (k < 1) throw InvalidSpec("system: k must be >= 1");
  if (m < 1) throw InvalidSpec("system: m must be >= 1");
  if (!(p_bar > 0.0)) throw InvalidSpec("system: p_bar must be > 0");
  if (!(sigma_n2 > 0.0)) throw InvalidSpec("system: sigma_n2 must be > 0");
  if (!(sigma_H2 > 0.0)) throw InvalidSpec("system: sigma_H2 must be > 0");
}

SystemConfig with_snr_db(SystemConfig base, double snr_db) {
  base.p_bar = base.sigma_n2 * std::pow(10.0, snr_db / 10.0);
  return base;
}

double minimum_nmse(const SystemConfig& cfg) {
  cfg.validate();
  return cfg.sigma_n2 / (static_cast<double>(cfg.n) * cfg.p_bar * cfg.sigma_H2);
}

Eigen::MatrixXcd ls_estimate(const Eigen::MatrixXcd& received,
                             const ActiveSignal& signal) {
  const int k = signal.users();
  const int n = signal.uses();
  if (received.cols() != n)
    throw InvalidSpec("ls_estimate: received samples and signal disagree on n");
  if (k > n)
    throw RankDeficient("ls_estimate: more users than channel uses");

  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(k, k);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(signal.matrix);
  gram = gram.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                     Eigen::EigenvaluesOnly);
  const double ev_min = es.eigenvalues()(0);
  const double ev_max = es.eigenvalues()(k - 1);
  if (!(ev_min > kRankTolerance * ev_max))
    throw RankDeficient("ls_estimate: Gram matrix numerically rank deficient");

  // H_hat = Y X^H G^{-1}; right-multiplication by G^{-1} is a Hermitian
  // solve against (Y X^H)^H
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  return llt.solve((received * signal.matrix.adjoint()).adjoint()).adjoint();
}

NmseBreakdown analytic_nmse(const SystemConfig& cfg,
                            const GeometrySummary& summary) {
  cfg.validate();
  if (summary.gram.rows() != cfg.k)
    throw InvalidSpec("analytic_nmse: summary does not match cfg.k");
  NmseBreakdown out;
  out.e_min = minimum_nmse(cfg);
  out.geometry_factor = summary.geometry_factor;
  out.nmse_analytic = out.e_min * out.geometry_factor;
  return out;
}

NmseBreakdown monte_carlo_nmse(const SystemConfig& cfg,
                               const ActiveSignal& signal, long trials,
                               std::uint64_t seed, int threads,
                               const Eigen::MatrixXcd* fixed_channel) {
  cfg.validate();
  if (trials < 1) throw InvalidSpec("monte_carlo_nmse: trials must be >= 1");
  if (threads < 1) throw InvalidSpec("monte_carlo_nmse: threads must be >= 1");
  if (signal.users() != cfg.k || signal.uses() != cfg.n)
    throw InvalidSpec("monte_carlo_nmse: signal shape does not match cfg");
  if (fixed_channel &&
      (fixed_channel->rows() != cfg.m || fixed_channel->cols() != cfg.k))
    throw InvalidSpec("monte_carlo_nmse: fixed channel must be m x k");

  // rank check + analytic reference once, factorization shared by all trials
  const GeometrySummary summary = summarize_geometry(signal, cfg.p_bar);
  NmseBreakdown out = analytic_nmse(cfg, summary);

  const Eigen::LLT<Eigen::MatrixXcd> llt(summary.gram);
  const Eigen::MatrixXcd x_adj = signal.matrix.adjoint();

  const int m = cfg.m;
  const int k = cfg.k;
  const int n = cfg.n;
  const double sigma_H2 = cfg.sigma_H2;
  const double sigma_n2 = cfg.sigma_n2;

  // per-trial (error energy, channel energy); reduced in index order below
  std::vector<std::array<double, 2>> partials(static_cast<std::size_t>(trials));

  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    GaussianStream stream(substream_seed(seed, t));

    Eigen::MatrixXcd h(m, k);
    if (fixed_channel) {
      h = *fixed_channel;
    } else {
      for (int c = 0; c < k; ++c)
        for (int r = 0; r < m; ++r) h(r, c) = stream.complex_normal(sigma_H2);
    }
    Eigen::MatrixXcd noise(m, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < m; ++r) noise(r, c) = stream.complex_normal(sigma_n2);

    const Eigen::MatrixXcd received = h * signal.matrix + noise;
    const Eigen::MatrixXcd estimate =
        llt.solve((received * x_adj).adjoint()).adjoint();

    partials[t] = {(estimate - h).squaredNorm(), h.squaredNorm()};
  });

  double error_energy = 0.0;
  double channel_energy = 0.0;
  for (const auto& p : partials) {
    error_energy += p[0];
    channel_energy += p[1];
  }
  out.nmse_empirical = error_energy / channel_energy;
  out.trials = trials;
  return out;
}

}  // namespace isac_fbl
