#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isac_fbl/channel_3gpp.hpp"
#include "isac_fbl/errors.hpp"
#include "isac_fbl/ls_sensing.hpp"

namespace isac_fbl {

enum class Experiment {
  tradeoff_snr,      // rate bounds vs SNR on an e_th grid
  tradeoff_surface,  // same, additionally swept over blocklengths
  montecarlo_verify, // empirical vs analytic NMSE
  crb_sweep,         // CRB vs SNR per parameter class and system variation
};

const char* experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);  // ValidationError

// Fully-resolved description of one experiment run, parsed from a JSON
// config file. Defaults (applied when a key is absent) are the reference
// operating point: n = 1000, k = 16, m = 10, sigma_n2 = 1, sigma_H2 = 1,
// p_bar = 1, fc = 28 GHz, c = 3e8 m/s, Ts = 4 us, d_a = lambda/2, and the
// variation grids m in {8, 64, 128}, fc in {3, 28, 60} GHz,
// n in {200, 800, 3200}.
struct RunConfig {
  Experiment experiment = Experiment::tradeoff_snr;
  SystemConfig system;

  std::vector<double> e_th_grid;   // grids.e_th
  std::vector<double> snr_db_grid; // grids.snr_db
  std::vector<int> n_grid;         // grids.n (surface / montecarlo)

  RadioConfig radio;               // n, m mirror `system` at load time

  std::vector<int> m_variations;       // variations.m   (AoA CRB)
  std::vector<double> fc_variations;   // variations.fc  (range CRB)
  std::vector<int> n_variations;       // variations.n   (velocity CRB)

  long trials = 1000;
  std::uint64_t seed = 0;
  std::string output_path;
};

// Parses and validates a config file. Unknown keys, missing required keys,
// wrong types, and per-experiment constraint violations all raise
// ValidationError naming the offending field path (e.g. "system.k");
// malformed JSON raises ParseError; an unreadable file raises IoError.
RunConfig load_config(const std::string& path);

// Same, from an in-memory JSON document.
RunConfig parse_config(const std::string& json_text);

// Canonical single-line JSON form of a config: every field materialized,
// keys sorted. parse_config(serialize_config(c)) reproduces c exactly, and
// the CSV writers embed this string so an output file pins down the run that
// produced it.
std::string serialize_config(const RunConfig& cfg);

}  // namespace isac_fbl
