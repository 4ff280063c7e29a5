// qkin: command-line driver for the qkinetics shared library.
//
// Subcommands: kmc, uu, condensate, regime, basis-check.  Every run writes a
// manifest.json whose embedded config text reproduces the run byte-for-byte
// on the same build.  Exit codes: 0 success, 2 configuration error,
// 3 capacity guard, 4 numerical failure.

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kv_config.hpp"
#include "qkinetics.h"

namespace {

using json = nlohmann::json;
using qkin_cli::KeyValueMap;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(qk_status status) {
  switch (status) {
    case QK_OK:
      return 0;
    case QK_ERR_INVALID_ARGUMENT:
    case QK_ERR_DOMAIN:
      return 2;
    case QK_ERR_CAPACITY:
      return 3;
    case QK_ERR_NUMERICAL:
    case QK_ERR_INTERNAL:
      return 4;
  }
  return 4;
}

void check(qk_status status, const std::string& context) {
  if (status != QK_OK) {
    throw CliError{exit_code_for(status),
                   context + ": " + qk_status_name(status) + " (" + qk_last_error() + ")"};
  }
}

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// ---------------------------------------------------------------- options

// Binds long options to variables and merges config-file values underneath
// command-line values; records the effective configuration for the manifest.
class OptionRegistry {
 public:
  explicit OptionRegistry(CLI::App* app) : app_(app) {}

  void add_double(const std::string& key, double* var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, *var, help);
    entries_.push_back({key, opt, [var](const std::string& v) { *var = std::stod(v); },
                        [var] { return fmt(*var); }});
  }
  void add_u64(const std::string& key, std::uint64_t* var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, *var, help);
    entries_.push_back({key, opt, [var](const std::string& v) { *var = std::stoull(v); },
                        [var] { return std::to_string(*var); }});
  }
  void add_size(const std::string& key, std::size_t* var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, *var, help);
    entries_.push_back({key, opt,
                        [var](const std::string& v) { *var = std::stoull(v); },
                        [var] { return std::to_string(*var); }});
  }
  void add_int(const std::string& key, int* var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, *var, help);
    entries_.push_back({key, opt, [var](const std::string& v) { *var = std::stoi(v); },
                        [var] { return std::to_string(*var); }});
  }
  void add_string(const std::string& key, std::string* var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, *var, help);
    entries_.push_back({key, opt, [var](const std::string& v) { *var = v; },
                        [var] { return *var; }});
  }
  void add_flag(const std::string& key, bool* var, const std::string& help) {
    auto* opt = app_->add_flag("--" + key, *var, help);
    entries_.push_back({key, opt,
                        [var](const std::string& v) { *var = (v == "1" || v == "true"); },
                        [var] { return *var ? std::string("true") : std::string("false"); }});
  }

  // Config-file values fill in everything the command line left untouched.
  void merge_file(const KeyValueMap& file) {
    for (const auto& [key, value] : file) {
      const Entry* entry = find(key);
      if (entry == nullptr) {
        throw CliError{2, "unknown config key: " + key};
      }
      if (entry->option->count() > 0) continue;  // flags override file values
      try {
        entry->from_string(value);
      } catch (const std::exception&) {
        throw CliError{2, "config value for '" + key + "' is not parseable: " + value};
      }
    }
  }

  bool was_set(const std::string& key, const KeyValueMap& file) const {
    const Entry* entry = find(key);
    return (entry != nullptr && entry->option->count() > 0) || file.count(key) > 0;
  }

  KeyValueMap effective() const {
    KeyValueMap map;
    for (const auto& entry : entries_) map[entry.key] = entry.to_string();
    return map;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const std::string&)> from_string;
    std::function<std::string()> to_string;
  };
  const Entry* find(const std::string& key) const {
    for (const auto& entry : entries_) {
      if (entry.key == key) return &entry;
    }
    return nullptr;
  }
  CLI::App* app_;
  std::vector<Entry> entries_;
};

void require_positive(const std::string& name, double value) {
  if (!(value > 0.0)) {
    throw CliError{2, "parameter '" + name + "' must be positive (got " + fmt(value) + ")"};
  }
}

// ----------------------------------------------------------------- output

struct OutputDir {
  std::filesystem::path path;
  std::vector<std::string> files;

  explicit OutputDir(const std::string& dir) : path(dir) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw CliError{2, "cannot create output directory " + dir};
  }
  std::ofstream open(const std::string& name) {
    files.push_back(name);
    std::ofstream out(path / name, std::ios::binary);
    if (!out) throw CliError{2, "cannot open output file " + name};
    return out;
  }
  void write_text(const std::string& name, const std::string& text) {
    auto out = open(name);
    out << text;
  }
};

struct RunClock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void write_manifest(OutputDir& out, const std::string& subcommand, std::uint64_t seed,
                    const KeyValueMap& config, const json& diagnostics, double wall_s) {
  json manifest;
  manifest["tool"] = "qkin";
  manifest["version"] = qk_version();
  manifest["subcommand"] = subcommand;
  manifest["seed"] = seed;
  manifest["config"] = config;
  manifest["config_text"] = qkin_cli::serialize_kv(config);
  manifest["outputs"] = out.files;
  manifest["diagnostics"] = diagnostics;
  manifest["wall_time_s"] = wall_s;
  out.write_text("manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------- handles

struct LatticeGuard {
  qk_lattice* ptr = nullptr;
  ~LatticeGuard() { qk_lattice_destroy(ptr); }
};

struct ChannelsGuard {
  qk_channels* ptr = nullptr;
  ~ChannelsGuard() { qk_channels_destroy(ptr); }
};

struct SeriesGuard {
  qk_series* ptr = nullptr;
  ~SeriesGuard() { qk_series_destroy(ptr); }
};

std::string mode_label(const qk_lattice* lattice, std::size_t i) {
  int z[3];
  check(qk_lattice_mode(lattice, i, z), "lattice mode");
  return "n_" + std::to_string(z[0]) + "_" + std::to_string(z[1]) + "_" +
         std::to_string(z[2]);
}

std::vector<std::int64_t> parse_init_counts(const std::string& spec,
                                            const qk_lattice* lattice) {
  const std::size_t modes = qk_lattice_mode_count(lattice);
  if (spec.rfind("uniform:", 0) == 0) {
    const long long value = std::stoll(spec.substr(8));
    if (value < 0) throw CliError{2, "parameter 'init' must be nonnegative"};
    return std::vector<std::int64_t>(modes, value);
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<std::int64_t> counts;
    std::stringstream in(spec.substr(5));
    std::string item;
    while (std::getline(in, item, ',')) counts.push_back(std::stoll(item));
    if (counts.size() != modes) {
      throw CliError{2, "parameter 'init' lists " + std::to_string(counts.size()) +
                            " occupations for " + std::to_string(modes) +
                            " modes (lexicographic mode order)"};
    }
    return counts;
  }
  throw CliError{2, "parameter 'init' must be uniform:<k> or list:<n,n,...>"};
}

void dump_series_csv(std::ofstream& out, const qk_series* series) {
  const std::size_t rows = qk_series_rows(series);
  const std::size_t cols = qk_series_cols(series);
  for (std::size_t c = 0; c < cols; ++c) {
    out << (c ? "," : "") << qk_series_label(series, c);
  }
  out << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double value = 0;
      check(qk_series_value(series, r, c, &value), "series value");
      out << (c ? "," : "") << fmt(value);
    }
    out << "\n";
  }
}

// ------------------------------------------------------------------- kmc

struct KmcConfig {
  double box_length = 1e-6;
  int z_max = 1;
  double gamma = 1.0;
  double t_end = 1.0;
  std::size_t samples = 51;
  std::size_t trajectories = 1;
  std::size_t max_channels = 10'000'000;
  bool record_modes = false;
  std::string init = "uniform:1";
};

int run_kmc(const KmcConfig& cfg, std::uint64_t seed, const std::string& out_dir,
            int threads, const KeyValueMap& effective) {
  RunClock clock;
  require_positive("box_length", cfg.box_length);
  require_positive("gamma", cfg.gamma);
  if (cfg.t_end < 0) throw CliError{2, "parameter 't_end' must be nonnegative"};
  if (cfg.samples < 1) throw CliError{2, "parameter 'samples' must be at least 1"};
  if (cfg.trajectories < 1) throw CliError{2, "parameter 'trajectories' must be at least 1"};

  LatticeGuard lattice;
  check(qk_lattice_create_cube(cfg.box_length, cfg.z_max, &lattice.ptr), "lattice");
  ChannelsGuard channels;
  check(qk_channels_enumerate(lattice.ptr, cfg.max_channels, &channels.ptr), "channels");

  const auto counts = parse_init_counts(cfg.init, lattice.ptr);
  std::vector<double> sample_times(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    sample_times[i] = cfg.samples == 1
                          ? cfg.t_end
                          : cfg.t_end * static_cast<double>(i) /
                                static_cast<double>(cfg.samples - 1);
  }

  const std::size_t modes = qk_lattice_mode_count(lattice.ptr);
  std::vector<std::string> tables(cfg.trajectories);
  std::vector<std::uint64_t> digests(cfg.trajectories, 0);
  std::vector<std::uint64_t> steps(cfg.trajectories, 0);
  std::vector<int> truncated(cfg.trajectories, 0);
  std::vector<CliError> failures;
  std::mutex failure_mutex;

  auto worker = [&](std::size_t t) {
    try {
      qk_kmc_run* run = nullptr;
      check(qk_kmc_simulate(lattice.ptr, channels.ptr, counts.data(), cfg.gamma, cfg.t_end,
                            seed, t, sample_times.data(), sample_times.size(),
                            cfg.record_modes ? 1 : 0, &run),
            "kmc simulate");
      std::ostringstream csv;
      csv << "time,N,E,P_x,P_y,P_z,n_0";
      if (cfg.record_modes) {
        for (std::size_t m = 0; m < modes; ++m) csv << "," << mode_label(lattice.ptr, m);
      }
      csv << "\n";
      std::vector<std::int64_t> occ(modes);
      for (std::size_t i = 0; i < qk_kmc_sample_count(run); ++i) {
        double time = 0;
        std::int64_t n = 0, e = 0, nz = 0;
        std::int64_t p[3];
        check(qk_kmc_sample(run, i, &time, &n, &e, p, &nz), "kmc sample");
        csv << fmt(time) << "," << n << "," << e << "," << p[0] << "," << p[1] << ","
            << p[2] << "," << nz;
        if (cfg.record_modes) {
          check(qk_kmc_sample_modes(run, i, occ.data()), "kmc sample modes");
          for (std::size_t m = 0; m < modes; ++m) csv << "," << occ[m];
        }
        csv << "\n";
      }
      tables[t] = csv.str();
      digests[t] = qk_kmc_digest(run);
      steps[t] = qk_kmc_steps(run);
      truncated[t] = qk_kmc_truncated(run);
      qk_kmc_run_destroy(run);
    } catch (const CliError& e) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      failures.push_back(e);
    }
  };

  const int pool = std::max(1, std::min<int>(threads, static_cast<int>(cfg.trajectories)));
  if (pool == 1) {
    for (std::size_t t = 0; t < cfg.trajectories; ++t) worker(t);
  } else {
    std::vector<std::thread> team;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < pool; ++w) {
      team.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < cfg.trajectories;
             t = next.fetch_add(1)) {
          worker(t);
        }
      });
    }
    for (auto& th : team) th.join();
  }
  if (!failures.empty()) throw failures.front();

  OutputDir out(out_dir);
  json traj_info = json::array();
  for (std::size_t t = 0; t < cfg.trajectories; ++t) {
    char name[48];
    if (cfg.trajectories == 1) {
      std::snprintf(name, sizeof(name), "trajectory.csv");
    } else {
      std::snprintf(name, sizeof(name), "trajectory_%03zu.csv", t);
    }
    out.write_text(name, tables[t]);
    char digest_hex[20];
    std::snprintf(digest_hex, sizeof(digest_hex), "%016" PRIx64, digests[t]);
    traj_info.push_back({{"file", name},
                         {"digest", digest_hex},
                         {"steps", steps[t]},
                         {"truncated", truncated[t] != 0}});
  }

  json diagnostics;
  diagnostics["modes"] = qk_lattice_mode_count(lattice.ptr);
  diagnostics["channels"] = qk_channels_count(channels.ptr);
  diagnostics["trajectories"] = traj_info;
  write_manifest(out, "kmc", seed, effective, diagnostics, clock.seconds());

  std::cout << "kmc: " << cfg.trajectories << " trajectory(ies), "
            << qk_channels_count(channels.ptr) << " channels, outputs in " << out_dir
            << "\n";
  return 0;
}

// -------------------------------------------------------------------- uu

struct UuConfig {
  double box_length = 1e-6;
  int z_max = 1;
  double gamma = 1.0;
  double t_end = 1.0;
  std::size_t samples = 51;
  std::size_t max_channels = 10'000'000;
  double mass = 3.819e-26;
  std::string init = "uniform:1";
};

std::vector<double> parse_init_field(const UuConfig& cfg, const qk_lattice* lattice) {
  const std::size_t modes = qk_lattice_mode_count(lattice);
  if (cfg.init.rfind("be:", 0) == 0) {
    const std::string rest = cfg.init.substr(3);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw CliError{2, "parameter 'init' be form is be:<temperature>,<mu>"};
    }
    const double temperature = std::stod(rest.substr(0, comma));
    const double mu = std::stod(rest.substr(comma + 1));
    std::vector<double> field(modes);
    check(qk_be_field(lattice, cfg.mass, temperature, mu, field.data()), "be field");
    return field;
  }
  if (cfg.init.rfind("uniform:", 0) == 0) {
    const double value = std::stod(cfg.init.substr(8));
    if (value < 0) throw CliError{2, "parameter 'init' must be nonnegative"};
    return std::vector<double>(modes, value);
  }
  if (cfg.init.rfind("list:", 0) == 0) {
    std::vector<double> field;
    std::stringstream in(cfg.init.substr(5));
    std::string item;
    while (std::getline(in, item, ',')) field.push_back(std::stod(item));
    if (field.size() != modes) {
      throw CliError{2, "parameter 'init' lists " + std::to_string(field.size()) +
                            " occupations for " + std::to_string(modes) + " modes"};
    }
    return field;
  }
  throw CliError{2, "parameter 'init' must be uniform:<x>, list:<x,...>, or be:<T>,<mu>"};
}

int run_uu(const UuConfig& cfg, std::uint64_t seed, const std::string& out_dir,
           const KeyValueMap& effective) {
  RunClock clock;
  require_positive("box_length", cfg.box_length);
  require_positive("gamma", cfg.gamma);
  require_positive("mass", cfg.mass);
  if (cfg.t_end < 0) throw CliError{2, "parameter 't_end' must be nonnegative"};
  if (cfg.samples < 2) throw CliError{2, "parameter 'samples' must be at least 2"};

  LatticeGuard lattice;
  check(qk_lattice_create_cube(cfg.box_length, cfg.z_max, &lattice.ptr), "lattice");
  ChannelsGuard channels;
  check(qk_channels_enumerate(lattice.ptr, cfg.max_channels, &channels.ptr), "channels");

  const auto field = parse_init_field(cfg, lattice.ptr);
  SeriesGuard series;
  check(qk_uu_integrate(lattice.ptr, channels.ptr, field.data(), cfg.gamma, cfg.t_end,
                        cfg.samples, &series.ptr),
        "uu integrate");

  OutputDir out(out_dir);
  {
    auto csv = out.open("series.csv");
    dump_series_csv(csv, series.ptr);
  }

  const std::size_t rows = qk_series_rows(series.ptr);
  const std::size_t cols = qk_series_cols(series.ptr);
  double n_first = 0, n_last = 0, e_first = 0, e_last = 0;
  check(qk_series_value(series.ptr, 0, cols - 2, &n_first), "series");
  check(qk_series_value(series.ptr, rows - 1, cols - 2, &n_last), "series");
  check(qk_series_value(series.ptr, 0, cols - 1, &e_first), "series");
  check(qk_series_value(series.ptr, rows - 1, cols - 1, &e_last), "series");

  json diagnostics;
  diagnostics["modes"] = qk_lattice_mode_count(lattice.ptr);
  diagnostics["channels"] = qk_channels_count(channels.ptr);
  diagnostics["relative_number_drift"] =
      std::abs(n_last - n_first) / std::max(n_first, 1e-300);
  diagnostics["relative_energy_drift"] =
      std::abs(e_last - e_first) / std::max(e_first, 1e-300);
  write_manifest(out, "uu", seed, effective, diagnostics, clock.seconds());

  std::cout << "uu: integrated " << rows << " samples over t_end = " << fmt(cfg.t_end)
            << ", outputs in " << out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------- condensate

struct CondensateConfig {
  double box_length = 6e-7;
  int z_max = 2;
  double mass = 3.819e-26;
  double temperature = 1e-6;
  double mu = -1.380649e-29;
  double scattering_length = 4.9e-9;
  double cell_size = 1e-5;
  double eta = -1.0;
  double rho0 = 0.0;
  double phi0_re = 1.0;
  double phi0_im = 0.0;
  double t_end = 1.0;
  std::size_t samples = 101;
  double ceiling = 1e6;
};

int run_condensate(const CondensateConfig& cfg, std::uint64_t seed,
                   const std::string& out_dir, const KeyValueMap& effective) {
  RunClock clock;
  require_positive("box_length", cfg.box_length);
  require_positive("mass", cfg.mass);
  require_positive("temperature", cfg.temperature);
  require_positive("scattering_length", cfg.scattering_length);
  require_positive("cell_size", cfg.cell_size);
  require_positive("t_end", cfg.t_end);
  if (cfg.mu > 0) throw CliError{2, "parameter 'mu' must be <= 0"};

  const double delta = 3.14159265358979323846 / cfg.cell_size;

  LatticeGuard lattice;
  check(qk_lattice_create_cube(cfg.box_length, cfg.z_max, &lattice.ptr), "lattice");

  double g_plus = 0, g_minus = 0;
  std::size_t triads = 0;
  const double origin[3] = {0, 0, 0};
  check(qk_bath_kernels(lattice.ptr, cfg.mass, cfg.temperature, cfg.mu,
                        cfg.scattering_length, delta, cfg.eta, origin, &g_plus, &g_minus,
                        &triads),
        "bath kernels");

  double gain = 0;
  check(qk_gain_minus_loss_rate(cfg.temperature, cfg.mu, cfg.scattering_length, cfg.mass,
                                &gain),
        "gain minus loss");

  SeriesGuard rho_series;
  int unbounded = 0;
  check(qk_condensate_integrate_rho(lattice.ptr, cfg.mass, cfg.temperature, cfg.mu,
                                    cfg.scattering_length, delta, cfg.eta, cfg.rho0,
                                    cfg.t_end, cfg.samples, cfg.ceiling, &rho_series.ptr,
                                    &unbounded),
        "integrate rho");

  SeriesGuard phi_series;
  check(qk_condensate_integrate_phi(lattice.ptr, cfg.mass, cfg.temperature, cfg.mu,
                                    cfg.scattering_length, delta, cfg.eta, cfg.phi0_re,
                                    cfg.phi0_im, cfg.rho0, cfg.t_end, cfg.samples, 1,
                                    &phi_series.ptr),
        "integrate phi");

  OutputDir out(out_dir);
  {
    auto csv = out.open("rho.csv");
    dump_series_csv(csv, rho_series.ptr);
  }
  {
    auto csv = out.open("phi.csv");
    dump_series_csv(csv, phi_series.ptr);
  }

  json diagnostics;
  diagnostics["triad_count"] = triads;
  diagnostics["eta"] = cfg.eta;
  diagnostics["g_plus_at_origin"] = g_plus;
  diagnostics["g_minus_at_origin"] = g_minus;
  const double kms_expected = std::exp(cfg.mu / (1.380649e-23 * cfg.temperature));
  diagnostics["kms_ratio"] = g_minus != 0.0 ? g_plus / g_minus : 0.0;
  diagnostics["kms_residual"] =
      g_minus != 0.0 ? std::abs(g_plus / g_minus - kms_expected) / kms_expected : 0.0;
  diagnostics["gain_minus_loss_rate"] = gain;
  diagnostics["rho_unbounded"] = unbounded != 0;
  if (cfg.mu < 0) {
    double rho_stationary = 0;
    check(qk_stationary_rho(cfg.temperature, cfg.mu, delta, &rho_stationary),
          "stationary rho");
    diagnostics["rho_stationary"] = rho_stationary;
  }
  write_manifest(out, "condensate", seed, effective, diagnostics, clock.seconds());

  std::cout << "condensate: " << triads << " bath triads, gain-loss rate " << fmt(gain)
            << " 1/s" << (unbounded ? ", density ceiling reached" : "") << ", outputs in "
            << out_dir << "\n";
  return 0;
}

// ----------------------------------------------------------------- regime

struct RegimeConfig {
  double mass = 3.819e-26;
  double scattering_length = 4.9e-9;
  double temperature = 2e-6;
  double density = 2.79e15;
  double cell_size = 1e-4;
  double threshold = 10.0;
};

int run_regime(const RegimeConfig& cfg, std::uint64_t seed, const std::string& out_dir,
               const KeyValueMap& effective) {
  RunClock clock;
  require_positive("mass", cfg.mass);
  require_positive("scattering_length", cfg.scattering_length);
  require_positive("temperature", cfg.temperature);
  require_positive("density", cfg.density);
  require_positive("cell_size", cfg.cell_size);

  qk_gas_params gas{cfg.mass, cfg.scattering_length, cfg.temperature, cfg.density,
                    cfg.cell_size};
  qk_regime_report report;
  check(qk_regime_evaluate(&gas, cfg.threshold, &report), "regime evaluate");

  auto condition_json = [](const qk_condition& c) {
    return json{{"ratio", c.ratio},
                {"want_large", c.want_large != 0},
                {"threshold", c.threshold},
                {"pass", c.pass != 0}};
  };
  json body;
  body["lambda_thermal_m"] = report.lambda_thermal;
  body["lambda_mfp_m"] = report.lambda_mfp;
  body["xi_m"] = report.xi;
  body["k_diagonal"] = report.k_diagonal;
  body["critical_scale_m"] = report.critical_scale;
  body["weak_boundary_density_per_m3"] = report.weak_boundary_density;
  body["conditions"] = {{"cell_vs_thermal", condition_json(report.cell_vs_thermal)},
                        {"mfp_vs_thermal", condition_json(report.mfp_vs_thermal)},
                        {"mfp_vs_cell", condition_json(report.mfp_vs_cell)},
                        {"k_diagonal", condition_json(report.k_diagonal_condition)},
                        {"weak_condensation", condition_json(report.weak_condensation)}};
  body["all_pass"] = report.all_pass != 0;
  body["inequality_note"] = qk_regime_inequality_note();

  OutputDir out(out_dir);
  out.write_text("report.json", body.dump(2) + "\n");

  auto row = [](const char* name, const qk_condition& c) {
    std::printf("  %-30s %12.5g  %s %-9.4g %s\n", name, c.ratio,
                c.want_large ? ">=" : "<=",
                c.want_large ? c.threshold : 1.0 / c.threshold, c.pass ? "pass" : "FAIL");
  };
  std::printf("regime report\n");
  std::printf("  lambda_T   = %.6g m\n", report.lambda_thermal);
  std::printf("  lambda_mfp = %.6g m\n", report.lambda_mfp);
  std::printf("  xi         = %.6g m\n", report.xi);
  std::printf("  (a lambda_mfp lambda_T)^(1/3) = %.6g m\n", report.critical_scale);
  std::printf("  weak-condensation boundary density = %.6g 1/m^3\n",
              report.weak_boundary_density);
  row("l_c / lambda_T", report.cell_vs_thermal);
  row("lambda_mfp / lambda_T", report.mfp_vs_thermal);
  row("lambda_mfp / l_c", report.mfp_vs_cell);
  row("a lambda_mfp lambda_T / l_c^3", report.k_diagonal_condition);
  std::printf("  %-30s %12.5g  <= %-9.4g %s\n", "l_c / xi",
              report.weak_condensation.ratio, 1.0,
              report.weak_condensation.pass ? "pass" : "FAIL");
  std::printf("  note: %s\n", qk_regime_inequality_note());
  std::printf("  overall: %s\n", report.all_pass ? "pass" : "FAIL");

  write_manifest(out, "regime", seed, effective, body, clock.seconds());
  return 0;
}

// ------------------------------------------------------------ basis-check

struct BasisConfig {
  double delta = 1.0;
};

int run_basis_check(const BasisConfig& cfg, std::uint64_t seed, const std::string& out_dir,
                    const KeyValueMap& effective) {
  RunClock clock;
  require_positive("delta", cfg.delta);
  const double pi = 3.14159265358979323846;

  double dx = 0, dp = 0;
  check(qk_cell_geometry(cfg.delta, &dx, &dp), "cell geometry");
  const double product_error = std::abs(dx * dp / 6.62607015e-34 - 1.0);

  // Orthonormality over a small band/site grid, axis-embedded in 3-D.
  double max_orthonormality_error = 0.0;
  const double site_spacing = pi / cfg.delta;
  for (int ma = -1; ma <= 1; ++ma) {
    for (int mb = -1; mb <= 1; ++mb) {
      for (int na = -3; na <= 3; ++na) {
        for (int nb = -3; nb <= 3; ++nb) {
          const double band_a[3] = {2.0 * cfg.delta * ma, 0, 0};
          const double band_b[3] = {2.0 * cfg.delta * mb, 0, 0};
          const double site_a[3] = {site_spacing * na, 0, 0};
          const double site_b[3] = {site_spacing * nb, 0, 0};
          double value[2];
          check(qk_wavelet_overlap(band_a, site_a, band_b, site_b, cfg.delta, value),
                "overlap");
          const double expected = (ma == mb && na == nb) ? 1.0 : 0.0;
          max_orthonormality_error = std::max(
              max_orthonormality_error, std::hypot(value[0] - expected, value[1]));
        }
      }
    }
  }

  double g0 = 0;
  const double origin[3] = {0, 0, 0};
  check(qk_g_kernel(origin, cfg.delta, &g0), "g kernel");
  const double g0_expected = std::pow(cfg.delta / pi, 3);
  double max_symmetry_error = 0.0;
  for (int i = 1; i <= 16; ++i) {
    const double x[3] = {0.37 * i / cfg.delta, -0.11 * i / cfg.delta,
                         0.05 * i / cfg.delta};
    const double nx[3] = {-x[0], -x[1], -x[2]};
    double forward = 0, backward = 0;
    check(qk_g_kernel(x, cfg.delta, &forward), "g kernel");
    check(qk_g_kernel(nx, cfg.delta, &backward), "g kernel");
    max_symmetry_error = std::max(max_symmetry_error, std::abs(forward - backward));
  }

  double center = 0, up = 0, down = 0, residual = 0;
  check(qk_m_delta_oracle_1d(cfg.delta, 0.0, &center, &residual), "m_delta oracle");
  double residual_up = 0, residual_down = 0;
  check(qk_m_delta_oracle_1d(cfg.delta, cfg.delta, &up, &residual_up), "m_delta oracle");
  check(qk_m_delta_oracle_1d(cfg.delta, -cfg.delta, &down, &residual_down),
        "m_delta oracle");
  const double ratio_up = up / center;
  const double ratio_down = down / center;

  const bool pass = product_error < 1e-12 && max_orthonormality_error < 1e-12 &&
                    std::abs(g0 - g0_expected) < 1e-12 * g0_expected &&
                    max_symmetry_error == 0.0 && std::abs(ratio_up - 0.25) < 0.02 &&
                    std::abs(ratio_down - 0.25) < 0.02;

  json body;
  body["delta"] = cfg.delta;
  body["cell_size"] = dx;
  body["momentum_spacing"] = dp;
  body["phase_space_product_error"] = product_error;
  body["max_orthonormality_error"] = max_orthonormality_error;
  body["g_zero"] = g0;
  body["g_symmetry_error"] = max_symmetry_error;
  body["m_delta_oracle"] = {
      {"center", center},
      {"up", up},
      {"down", down},
      {"ratio_up", ratio_up},
      {"ratio_down", ratio_down},
      {"residual", std::max({residual, residual_up, residual_down})}};
  body["pass"] = pass;

  OutputDir out(out_dir);
  out.write_text("report.json", body.dump(2) + "\n");
  write_manifest(out, "basis-check", seed, effective, body, clock.seconds());

  std::printf("basis check (delta = %g)\n", cfg.delta);
  std::printf("  dx dp / h - 1          = %.3g\n", product_error);
  std::printf("  orthonormality error   = %.3g\n", max_orthonormality_error);
  std::printf("  g(0)                   = %.6g (expected %.6g)\n", g0, g0_expected);
  std::printf("  smearing ratios        = %.4f / %.4f (expected 0.25)\n", ratio_up,
              ratio_down);
  std::printf("  overall: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qkin: quantum kinetics of a weakly interacting Bose gas"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;

  KmcConfig kmc_cfg;
  UuConfig uu_cfg;
  CondensateConfig cond_cfg;
  RegimeConfig regime_cfg;
  BasisConfig basis_cfg;

  auto add_common = [&](CLI::App* sub, OptionRegistry& reg) {
    sub->add_option("--config", config_path, "key = value configuration file");
    reg.add_u64("seed", &seed, "random seed (generated and printed when omitted)");
    reg.add_string("out", &out_dir, "output directory");
    reg.add_int("threads", &threads, "worker threads for trajectory fan-out");
  };

  auto* kmc = app.add_subcommand("kmc", "stochastic master-equation trajectories");
  OptionRegistry kmc_reg(kmc);
  add_common(kmc, kmc_reg);
  kmc_reg.add_double("box_length", &kmc_cfg.box_length, "box length L (m)");
  kmc_reg.add_int("z_max", &kmc_cfg.z_max, "mode cutoff |z|_inf <= z_max");
  kmc_reg.add_double("gamma", &kmc_cfg.gamma, "base collision rate (1/s)");
  kmc_reg.add_double("t_end", &kmc_cfg.t_end, "simulated time (s)");
  kmc_reg.add_size("samples", &kmc_cfg.samples, "number of sample times");
  kmc_reg.add_size("trajectories", &kmc_cfg.trajectories, "independent trajectories");
  kmc_reg.add_size("max_channels", &kmc_cfg.max_channels, "channel-count guard");
  kmc_reg.add_flag("record_modes", &kmc_cfg.record_modes, "per-mode occupations in CSV");
  kmc_reg.add_string("init", &kmc_cfg.init,
                     "initial occupations: uniform:<k> or list:<n,n,...>");

  auto* uu = app.add_subcommand("uu", "factorized mean-occupation kinetics");
  OptionRegistry uu_reg(uu);
  add_common(uu, uu_reg);
  uu_reg.add_double("box_length", &uu_cfg.box_length, "box length L (m)");
  uu_reg.add_int("z_max", &uu_cfg.z_max, "mode cutoff");
  uu_reg.add_double("gamma", &uu_cfg.gamma, "base collision rate (1/s)");
  uu_reg.add_double("t_end", &uu_cfg.t_end, "integration time (s)");
  uu_reg.add_size("samples", &uu_cfg.samples, "number of sample rows");
  uu_reg.add_size("max_channels", &uu_cfg.max_channels, "channel-count guard");
  uu_reg.add_double("mass", &uu_cfg.mass, "atomic mass (kg), used by init=be:");
  uu_reg.add_string("init", &uu_cfg.init,
                    "initial field: uniform:<x>, list:<x,...>, or be:<T>,<mu>");

  auto* cond = app.add_subcommand("condensate", "condensate-band kinetics against a bath");
  OptionRegistry cond_reg(cond);
  add_common(cond, cond_reg);
  cond_reg.add_double("box_length", &cond_cfg.box_length, "bath box length (m)");
  cond_reg.add_int("z_max", &cond_cfg.z_max, "bath mode cutoff");
  cond_reg.add_double("mass", &cond_cfg.mass, "atomic mass (kg)");
  cond_reg.add_double("temperature", &cond_cfg.temperature, "bath temperature (K)");
  cond_reg.add_double("mu", &cond_cfg.mu, "bath chemical potential (J), <= 0");
  cond_reg.add_double("scattering_length", &cond_cfg.scattering_length,
                      "s-wave scattering length (m)");
  cond_reg.add_double("cell_size", &cond_cfg.cell_size, "cell size l_c (m)");
  cond_reg.add_double("eta", &cond_cfg.eta, "triad energy window (J); < 0 = eps0/2");
  cond_reg.add_double("rho0", &cond_cfg.rho0, "initial condensate density (1/m^3)");
  cond_reg.add_double("phi0_re", &cond_cfg.phi0_re, "initial amplitude, real part");
  cond_reg.add_double("phi0_im", &cond_cfg.phi0_im, "initial amplitude, imaginary part");
  cond_reg.add_double("t_end", &cond_cfg.t_end, "integration time (s)");
  cond_reg.add_size("samples", &cond_cfg.samples, "number of sample rows");
  cond_reg.add_double("ceiling", &cond_cfg.ceiling,
                      "unbounded-growth ceiling in units of g(0)");

  auto* regime = app.add_subcommand("regime", "validity-regime report");
  OptionRegistry regime_reg(regime);
  add_common(regime, regime_reg);
  regime_reg.add_double("mass", &regime_cfg.mass, "atomic mass (kg)");
  regime_reg.add_double("scattering_length", &regime_cfg.scattering_length,
                        "s-wave scattering length (m)");
  regime_reg.add_double("temperature", &regime_cfg.temperature, "temperature (K)");
  regime_reg.add_double("density", &regime_cfg.density, "number density (1/m^3)");
  regime_reg.add_double("cell_size", &regime_cfg.cell_size, "cell size l_c (m)");
  regime_reg.add_double("threshold", &regime_cfg.threshold, ">>/<< threshold factor");

  auto* basis = app.add_subcommand("basis-check", "phase-space basis diagnostics");
  OptionRegistry basis_reg(basis);
  add_common(basis, basis_reg);
  basis_reg.add_double("delta", &basis_cfg.delta, "band half-width (1/m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  OptionRegistry* registry = nullptr;
  CLI::App* active = nullptr;
  if (kmc->parsed()) {
    registry = &kmc_reg;
    active = kmc;
  } else if (uu->parsed()) {
    registry = &uu_reg;
    active = uu;
  } else if (cond->parsed()) {
    registry = &cond_reg;
    active = cond;
  } else if (regime->parsed()) {
    registry = &regime_reg;
    active = regime;
  } else {
    registry = &basis_reg;
    active = basis;
  }

  try {
    KeyValueMap file_map;
    if (!config_path.empty()) {
      try {
        file_map = qkin_cli::parse_kv_file(config_path);
      } catch (const std::exception& e) {
        throw CliError{2, e.what()};
      }
    }
    registry->merge_file(file_map);

    if (!registry->was_set("seed", file_map)) {
      std::random_device entropy;
      seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
      std::cout << "seed = " << seed << " (generated)\n";
    }
    if (threads < 1) throw CliError{2, "parameter 'threads' must be at least 1"};

    const KeyValueMap effective = registry->effective();
    if (active == kmc) return run_kmc(kmc_cfg, seed, out_dir, threads, effective);
    if (active == uu) return run_uu(uu_cfg, seed, out_dir, effective);
    if (active == cond) return run_condensate(cond_cfg, seed, out_dir, effective);
    if (active == regime) return run_regime(regime_cfg, seed, out_dir, effective);
    return run_basis_check(basis_cfg, seed, out_dir, effective);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
