#include "isac_fbl/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <string>

#include "isac_fbl/codebook.hpp"
#include "isac_fbl/crb.hpp"
#include "isac_fbl/rng.hpp"
#include "isac_fbl/tradeoff_bounds.hpp"
#include "isac_fbl/version.hpp"

namespace isac_fbl {

namespace {

// all floats in CSV output carry 12 significant digits
std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

void write_line(std::ofstream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

std::ofstream open_output(const RunConfig& cfg) {
  if (cfg.output_path.empty())
    throw ValidationError(
        "config: output_path: required (set it in the config file or pass "
        "--output)");
  std::ofstream out(cfg.output_path);
  if (!out) throw IoError("cannot open output file: " + cfg.output_path);
  // metadata: artifact version and the canonical config echo, so any CSV
  // identifies the exact run that produced it
  out << "# isac-fbl " << kVersion << "\n";
  out << "# config " << serialize_config(cfg) << "\n";
  return out;
}

void finish_output(std::ofstream& out, const RunConfig& cfg) {
  out.flush();
  if (!out) throw IoError("failed writing output file: " + cfg.output_path);
}

// payload bits per codeword used when an experiment needs a materialized
// codebook: the smallest payload that still offers k distinct codewords
double materialization_bits(int k) {
  return std::max(1.0, std::ceil(std::log2(static_cast<double>(k))));
}

}  // namespace

std::vector<std::string> csv_header(Experiment e) {
  switch (e) {
    case Experiment::tradeoff_snr:
    case Experiment::tradeoff_surface:
      return {"n",         "k",         "m",          "snr_db",
              "e_th",      "e_min",     "rho_achi",   "rho_conv",
              "rate_achi", "rate_conv", "shannon_rate", "silent_achi",
              "silent_conv"};
    case Experiment::montecarlo_verify:
      return {"n",      "k",      "m",      "snr_db", "trials",
              "nmse_analytic", "nmse_empirical", "rel_err"};
    case Experiment::crb_sweep:
      return {"parameter", "variation", "variation_value", "snr_db",
              "crb_trace"};
  }
  return {};
}

std::vector<UserState> default_user_states(int k) {
  if (k < 1) throw InvalidSpec("default_user_states: k must be >= 1");
  std::vector<UserState> states(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    UserState& u = states[static_cast<std::size_t>(i)];
    // angles strictly inside (-60, 60) degrees, ranges across [20, 200] m,
    // velocities across [-30, 30] m/s; midpoints when k == 1
    u.theta = (-60.0 + (i + 1) * 120.0 / (k + 1)) * std::numbers::pi / 180.0;
    u.range = (k == 1) ? 110.0 : 20.0 + i * 180.0 / (k - 1);
    u.velocity = (k == 1) ? 0.0 : -30.0 + i * 60.0 / (k - 1);
  }
  return states;
}

long run_tradeoff(const RunConfig& cfg) {
  std::ofstream out = open_output(cfg);
  write_line(out, csv_header(cfg.experiment));

  const std::vector<int> blocklengths =
      cfg.experiment == Experiment::tradeoff_surface
          ? cfg.n_grid
          : std::vector<int>{cfg.system.n};

  long rows = 0;
  for (const int n : blocklengths) {
    SystemConfig sys = cfg.system;
    sys.n = n;
    const std::vector<TradeoffPoint> points =
        tradeoff_sweep(sys, cfg.e_th_grid, cfg.snr_db_grid);
    std::size_t idx = 0;
    for (const double snr_db : cfg.snr_db_grid) {
      for (std::size_t e = 0; e < cfg.e_th_grid.size(); ++e) {
        const TradeoffPoint& p = points[idx++];
        write_line(out, {fmt(n), fmt(sys.k), fmt(sys.m), fmt(snr_db),
                         fmt(p.e_th), fmt(p.e_min), fmt(p.rho_achi),
                         fmt(p.rho_conv), fmt(p.rate_achi), fmt(p.rate_conv),
                         fmt(p.shannon_rate), fmt(p.silent_achi),
                         fmt(p.silent_conv)});
        ++rows;
      }
    }
  }
  finish_output(out, cfg);
  return rows;
}

long run_montecarlo(const RunConfig& cfg, int threads) {
  std::ofstream out = open_output(cfg);
  write_line(out, csv_header(cfg.experiment));

  long rows = 0;
  std::uint64_t row_index = 0;
  for (const int n : cfg.n_grid) {
    for (const double snr_db : cfg.snr_db_grid) {
      SystemConfig sys = cfg.system;
      sys.n = n;
      sys = with_snr_db(sys, snr_db);

      // each row gets its own codebook and trial substreams, so rows are
      // reproducible in isolation
      const std::uint64_t signal_seed = substream_seed(cfg.seed, 2 * row_index);
      const std::uint64_t trial_seed =
          substream_seed(cfg.seed, 2 * row_index + 1);
      const CodebookSpec spec{sys.n, materialization_bits(sys.k), sys.k,
                              sys.p_bar, signal_seed};
      const ActiveSignal signal = sample_active_codewords(spec, signal_seed);
      const NmseBreakdown mc =
          monte_carlo_nmse(sys, signal, cfg.trials, trial_seed, threads);

      const double rel_err =
          std::abs(*mc.nmse_empirical - mc.nmse_analytic) / mc.nmse_analytic;
      write_line(out, {fmt(n), fmt(sys.k), fmt(sys.m), fmt(snr_db),
                       fmt(cfg.trials), fmt(mc.nmse_analytic),
                       fmt(*mc.nmse_empirical), fmt(rel_err)});
      ++rows;
      ++row_index;
    }
  }
  finish_output(out, cfg);
  return rows;
}

long run_crb_sweep(const RunConfig& cfg) {
  std::ofstream out = open_output(cfg);
  write_line(out, csv_header(cfg.experiment));

  const std::vector<UserState> states = default_user_states(cfg.system.k);

  // unit-power Gram per distinct blocklength; scaled to p_bar per SNR point.
  // The cache keeps the codebook identical across variations that share n.
  std::map<int, Eigen::MatrixXcd> gram_cache;
  const auto unit_gram = [&](int n) -> const Eigen::MatrixXcd& {
    auto it = gram_cache.find(n);
    if (it == gram_cache.end()) {
      const CodebookSpec spec{n, materialization_bits(cfg.system.k),
                              cfg.system.k, 1.0, cfg.seed};
      const ActiveSignal signal = sample_active_codewords(
          spec, substream_seed(cfg.seed, static_cast<std::uint64_t>(n)));
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(cfg.system.k, cfg.system.k);
      g.selfadjointView<Eigen::Lower>().rankUpdate(signal.matrix);
      g = g.selfadjointView<Eigen::Lower>();
      it = gram_cache.emplace(n, std::move(g)).first;
    }
    return it->second;
  };

  long rows = 0;
  // parameter classes in lexicographic order to match the row sort contract
  const struct {
    SensingParameter parameter;
    const char* name;
    const char* variation;
  } passes[] = {
      {SensingParameter::aoa, "aoa", "m"},
      {SensingParameter::range, "range", "fc"},
      {SensingParameter::velocity, "velocity", "n"},
  };

  for (const auto& pass : passes) {
    const std::size_t count = pass.parameter == SensingParameter::aoa
                                  ? cfg.m_variations.size()
                                  : pass.parameter == SensingParameter::range
                                        ? cfg.fc_variations.size()
                                        : cfg.n_variations.size();
    for (std::size_t v = 0; v < count; ++v) {
      RadioConfig radio = cfg.radio;
      radio.n = cfg.system.n;
      radio.m = cfg.system.m;
      double variation_value = 0.0;
      switch (pass.parameter) {
        case SensingParameter::aoa:
          radio.m = cfg.m_variations[v];
          variation_value = cfg.m_variations[v];
          break;
        case SensingParameter::range:
          radio.fc = cfg.fc_variations[v];
          variation_value = cfg.fc_variations[v];
          break;
        case SensingParameter::velocity:
          radio.n = cfg.n_variations[v];
          variation_value = cfg.n_variations[v];
          break;
      }
      const JacobianMatrix jac = build_jacobian(states, radio, pass.parameter);
      const Eigen::MatrixXcd& g1 = unit_gram(radio.n);

      for (const double snr_db : cfg.snr_db_grid) {
        const double p_bar =
            cfg.system.sigma_n2 * std::pow(10.0, snr_db / 10.0);
        const CrbResult res =
            crb_trace(jac, (p_bar * g1).eval(), cfg.system.sigma_n2);
        write_line(out, {pass.name, pass.variation, fmt(variation_value),
                         fmt(snr_db), fmt(res.crb_trace)});
        ++rows;
      }
    }
  }
  finish_output(out, cfg);
  return rows;
}

long run_experiment(const RunConfig& cfg, int threads) {
  if (threads < 1) throw InvalidSpec("run_experiment: threads must be >= 1");
  switch (cfg.experiment) {
    case Experiment::tradeoff_snr:
    case Experiment::tradeoff_surface:
      return run_tradeoff(cfg);
    case Experiment::montecarlo_verify:
      return run_montecarlo(cfg, threads);
    case Experiment::crb_sweep:
      return run_crb_sweep(cfg);
  }
  throw InvalidSpec("run_experiment: unknown experiment");
}

}  // namespace isac_fbl
