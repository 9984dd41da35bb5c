#include "isac_fbl/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>

namespace isac_fbl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("config: " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "must be an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(
        allowed.begin(), allowed.end(),
        [&](const char* key) { return item.key() == key; });
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(),
                     "unknown key");
  }
}

std::string join_path(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double get_double(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join_path(path, key), "must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join_path(path, key), "must be an integer");
  return v.get<int>();
}

long get_long(const json& obj, const std::string& path, const char* key,
              long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join_path(path, key), "must be an integer");
  return v.get<long>();
}

std::uint64_t get_u64(const json& obj, const std::string& path,
                      const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0)
    return static_cast<std::uint64_t>(v.get<long long>());
  fail(join_path(path, key), "must be a non-negative integer");
}

std::string get_string(const json& obj, const std::string& path,
                       const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join_path(path, key), "must be a string");
  return v.get<std::string>();
}

std::vector<double> get_double_array(const json& obj, const std::string& path,
                                     const char* key,
                                     std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) fail(join_path(path, key), "must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_number())
      fail(join_path(path, key), "must be an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

std::vector<int> get_int_array(const json& obj, const std::string& path,
                               const char* key, std::vector<int> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) fail(join_path(path, key), "must be an array of integers");
  std::vector<int> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_number_integer())
      fail(join_path(path, key), "must be an array of integers");
    out.push_back(item.get<int>());
  }
  return out;
}

template <typename T>
void require_sorted_nonempty(const std::vector<T>& grid,
                             const std::string& path) {
  if (grid.empty()) fail(path, "must be non-empty");
  if (!std::is_sorted(grid.begin(), grid.end()))
    fail(path, "must be sorted ascending");
}

template <typename T>
void require_positive(const std::vector<T>& grid, const std::string& path) {
  for (const T& v : grid)
    if (!(v > T(0))) fail(path, "entries must be > 0");
}

// constraints that depend on the experiment type; everything here is
// checkable before any computation starts
void validate_config(RunConfig& cfg) {
  cfg.system.validate();
  cfg.radio.validate();
  if (cfg.trials < 1) fail("trials", "must be >= 1");

  switch (cfg.experiment) {
    case Experiment::tradeoff_snr:
    case Experiment::tradeoff_surface:
      if (cfg.system.k < 2) fail("system.k", "tradeoff bounds need k >= 2");
      require_sorted_nonempty(cfg.e_th_grid, "grids.e_th");
      require_positive(cfg.e_th_grid, "grids.e_th");
      require_sorted_nonempty(cfg.snr_db_grid, "grids.snr_db");
      if (cfg.experiment == Experiment::tradeoff_surface) {
        require_sorted_nonempty(cfg.n_grid, "grids.n");
        require_positive(cfg.n_grid, "grids.n");
      }
      break;
    case Experiment::montecarlo_verify:
      require_sorted_nonempty(cfg.snr_db_grid, "grids.snr_db");
      if (cfg.n_grid.empty()) cfg.n_grid = {cfg.system.n};
      require_sorted_nonempty(cfg.n_grid, "grids.n");
      require_positive(cfg.n_grid, "grids.n");
      if (cfg.system.k > cfg.n_grid.front())
        fail("grids.n", "least-squares estimation needs k <= n");
      break;
    case Experiment::crb_sweep:
      require_sorted_nonempty(cfg.snr_db_grid, "grids.snr_db");
      require_sorted_nonempty(cfg.m_variations, "variations.m");
      require_positive(cfg.m_variations, "variations.m");
      require_sorted_nonempty(cfg.fc_variations, "variations.fc");
      require_positive(cfg.fc_variations, "variations.fc");
      require_sorted_nonempty(cfg.n_variations, "variations.n");
      require_positive(cfg.n_variations, "variations.n");
      if (cfg.system.k > cfg.n_variations.front() ||
          cfg.system.k > cfg.system.n)
        fail("variations.n", "Gram positivity needs k <= n");
      break;
  }
}

RunConfig from_json(const json& root) {
  check_keys(root, "", {"experiment", "system", "grids", "radio", "variations",
                        "trials", "seed", "output_path"});
  if (!root.contains("experiment")) fail("experiment", "required");

  RunConfig cfg;
  cfg.experiment =
      experiment_from_name(get_string(root, "", "experiment", ""));

  const json sys = root.contains("system") ? root.at("system") : json::object();
  check_keys(sys, "system", {"n", "k", "m", "p_bar", "sigma_n2", "sigma_H2"});
  cfg.system.n = get_int(sys, "system", "n", 1000);
  cfg.system.k = get_int(sys, "system", "k", 16);
  cfg.system.m = get_int(sys, "system", "m", 10);
  cfg.system.p_bar = get_double(sys, "system", "p_bar", 1.0);
  cfg.system.sigma_n2 = get_double(sys, "system", "sigma_n2", 1.0);
  cfg.system.sigma_H2 = get_double(sys, "system", "sigma_H2", 1.0);

  const json grids = root.contains("grids") ? root.at("grids") : json::object();
  check_keys(grids, "grids", {"e_th", "snr_db", "n"});
  cfg.e_th_grid = get_double_array(grids, "grids", "e_th", {});
  cfg.snr_db_grid = get_double_array(grids, "grids", "snr_db", {});
  cfg.n_grid = get_int_array(grids, "grids", "n", {});

  const json radio = root.contains("radio") ? root.at("radio") : json::object();
  check_keys(radio, "radio", {"fc", "c", "Ts", "d_a"});
  cfg.radio.fc = get_double(radio, "radio", "fc", 28e9);
  cfg.radio.c = get_double(radio, "radio", "c", 3e8);
  cfg.radio.Ts = get_double(radio, "radio", "Ts", 4e-6);
  if (radio.contains("d_a"))
    cfg.radio.d_a = get_double(radio, "radio", "d_a", 0.0);
  cfg.radio.n = cfg.system.n;
  cfg.radio.m = cfg.system.m;

  const json vars =
      root.contains("variations") ? root.at("variations") : json::object();
  check_keys(vars, "variations", {"m", "fc", "n"});
  cfg.m_variations = get_int_array(vars, "variations", "m", {8, 64, 128});
  cfg.fc_variations =
      get_double_array(vars, "variations", "fc", {3e9, 28e9, 60e9});
  cfg.n_variations = get_int_array(vars, "variations", "n", {200, 800, 3200});

  cfg.trials = get_long(root, "", "trials", 1000);
  cfg.seed = get_u64(root, "", "seed", 0);
  cfg.output_path = get_string(root, "", "output_path", "");

  validate_config(cfg);
  return cfg;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::tradeoff_snr: return "tradeoff_snr";
    case Experiment::tradeoff_surface: return "tradeoff_surface";
    case Experiment::montecarlo_verify: return "montecarlo_verify";
    case Experiment::crb_sweep: return "crb_sweep";
  }
  return "unknown";
}

Experiment experiment_from_name(const std::string& name) {
  if (name == "tradeoff_snr") return Experiment::tradeoff_snr;
  if (name == "tradeoff_surface") return Experiment::tradeoff_surface;
  if (name == "montecarlo_verify") return Experiment::montecarlo_verify;
  if (name == "crb_sweep") return Experiment::crb_sweep;
  fail("experiment",
       "must be one of tradeoff_snr, tradeoff_surface, montecarlo_verify, "
       "crb_sweep");
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return from_json(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["experiment"] = experiment_name(cfg.experiment);
  root["system"] = {{"n", cfg.system.n},       {"k", cfg.system.k},
                    {"m", cfg.system.m},       {"p_bar", cfg.system.p_bar},
                    {"sigma_n2", cfg.system.sigma_n2},
                    {"sigma_H2", cfg.system.sigma_H2}};
  json grids = json::object();
  if (!cfg.e_th_grid.empty()) grids["e_th"] = cfg.e_th_grid;
  if (!cfg.snr_db_grid.empty()) grids["snr_db"] = cfg.snr_db_grid;
  if (!cfg.n_grid.empty()) grids["n"] = cfg.n_grid;
  root["grids"] = grids;
  json radio = {{"fc", cfg.radio.fc}, {"c", cfg.radio.c}, {"Ts", cfg.radio.Ts}};
  if (cfg.radio.d_a) radio["d_a"] = *cfg.radio.d_a;
  root["radio"] = radio;
  root["variations"] = {{"m", cfg.m_variations},
                        {"fc", cfg.fc_variations},
                        {"n", cfg.n_variations}};
  root["trials"] = cfg.trials;
  root["seed"] = cfg.seed;
  root["output_path"] = cfg.output_path;
  return root.dump();  // object keys are kept sorted by the json type
}

}  // namespace isac_fbl
