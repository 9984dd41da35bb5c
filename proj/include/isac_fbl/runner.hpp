#pragma once

#include <string>
#include <vector>

#include "isac_fbl/run_config.hpp"

namespace isac_fbl {

// Column names of the CSV a given experiment writes. The rows follow the
// header's key columns in lexicographic order, floats are printed with 12
// significant digits, and flags as 0/1, so repeated runs of one config are
// byte-identical.
std::vector<std::string> csv_header(Experiment e);

// Default user placement for CRB sweeps with k users: angles evenly spaced
// inside (-60, 60) degrees, ranges on [20, 200] m, velocities on [-30, 30]
// m/s, unit gains. Deterministic in k.
std::vector<UserState> default_user_states(int k);

// Executes one experiment and writes its CSV to cfg.output_path. Returns the
// number of data rows written. threads parallelizes Monte Carlo trials only;
// outputs do not depend on it.
long run_experiment(const RunConfig& cfg, int threads = 1);

long run_tradeoff(const RunConfig& cfg);         // tradeoff_snr / surface
long run_montecarlo(const RunConfig& cfg, int threads);
long run_crb_sweep(const RunConfig& cfg);

}  // namespace isac_fbl
