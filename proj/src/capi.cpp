#include "qkinetics.h"

#include <cstring>
#include <string>
#include <vector>

#include "basis.hpp"
#include "condensate.hpp"
#include "errors.hpp"
#include "kmc.hpp"
#include "lattice.hpp"
#include "meanfield.hpp"
#include "occupation.hpp"
#include "regime.hpp"
#include "stationary.hpp"

namespace {

thread_local std::string g_last_error;

qk_status fail(qk_status status, const char* what) {
  g_last_error = what != nullptr ? what : "";
  return status;
}

template <typename Fn>
qk_status guarded(Fn&& fn) {
  try {
    fn();
    return QK_OK;
  } catch (const std::invalid_argument& e) {
    return fail(QK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(QK_ERR_DOMAIN, e.what());
  } catch (const qkin::CapacityError& e) {
    return fail(QK_ERR_CAPACITY, e.what());
  } catch (const qkin::NumericalError& e) {
    return fail(QK_ERR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(QK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QK_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw std::invalid_argument(what);
}

}  // namespace

struct qk_lattice;

struct qk_lattice {
  qkin::ModeLattice impl;
};

struct qk_channels {
  qkin::ChannelTable impl;
};

struct qk_kmc_run {
  qkin::kmc::KmcRun impl;
};

struct qk_shell {
  qkin::kmc::ShellDistribution impl;
  const qk_lattice* lattice;
};

struct qk_series {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

namespace {

qkin::condensate::BathModel make_model(const qk_lattice* lattice, double mass,
                                       double temperature, double mu,
                                       double scattering_length, double delta,
                                       double eta) {
  require(lattice != nullptr, "null lattice");
  qkin::condensate::BathModel model;
  model.lattice = &lattice->impl;
  model.mass = mass;
  model.bath = {temperature, mu};
  model.scattering_length = scattering_length;
  model.delta = delta;
  model.eta = eta;
  return model;
}

}  // namespace

extern "C" {

const char* qk_status_name(qk_status status) {
  switch (status) {
    case QK_OK: return "ok";
    case QK_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QK_ERR_DOMAIN: return "domain error";
    case QK_ERR_CAPACITY: return "capacity guard exceeded";
    case QK_ERR_NUMERICAL: return "numerical failure";
    case QK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qk_last_error(void) { return g_last_error.c_str(); }

const char* qk_version(void) { return "0.1.0"; }

/* ------------------------------------------------------------------ basis */

qk_status qk_wavelet_eval(double band, double site, double x, double delta, double out[2]) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto v = qkin::basis::wavelet_1d(band, site, x, delta);
    out[0] = v.real();
    out[1] = v.imag();
  });
}

qk_status qk_wavelet_overlap(const double band_a[3], const double site_a[3],
                             const double band_b[3], const double site_b[3], double delta,
                             double out[2]) {
  return guarded([&] {
    require(band_a && site_a && band_b && site_b && out, "null argument");
    qkin::basis::WaveletIndex a{delta, {band_a[0], band_a[1], band_a[2]},
                                {site_a[0], site_a[1], site_a[2]}};
    qkin::basis::WaveletIndex b{delta, {band_b[0], band_b[1], band_b[2]},
                                {site_b[0], site_b[1], site_b[2]}};
    const auto v = qkin::basis::overlap(a, b);
    out[0] = v.real();
    out[1] = v.imag();
  });
}

qk_status qk_g_kernel(const double x[3], double delta, double* out) {
  return guarded([&] {
    require(x != nullptr && out != nullptr, "null argument");
    *out = qkin::basis::g_kernel({x[0], x[1], x[2]}, delta);
  });
}

qk_status qk_cell_geometry(double delta, double* dx, double* dp) {
  return guarded([&] {
    require(dx != nullptr && dp != nullptr, "null output");
    const auto [sx, sp] = qkin::basis::cell_geometry(delta);
    *dx = sx;
    *dp = sp;
  });
}

qk_status qk_m_delta_weight(const double q[3], double delta, double* out) {
  return guarded([&] {
    require(q != nullptr && out != nullptr, "null argument");
    *out = qkin::basis::m_delta_weight({q[0], q[1], q[2]}, delta);
  });
}

qk_status qk_m_delta_oracle_1d(double delta, double q, double* value, double* residual) {
  return guarded([&] {
    require(value != nullptr, "null output");
    const auto result = qkin::basis::m_delta_oracle_1d(delta, q);
    *value = result.value;
    if (residual != nullptr) *residual = result.residual;
  });
}

/* ---------------------------------------------------------------- lattice */

qk_status qk_lattice_create_cube(double box_length, int z_max, qk_lattice** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new qk_lattice{qkin::ModeLattice::cube(box_length, z_max)};
  });
}

qk_status qk_lattice_create(double box_length, const int* z_triples, size_t n_modes,
                            qk_lattice** out) {
  return guarded([&] {
    require(out != nullptr && z_triples != nullptr, "null argument");
    std::vector<qkin::Vec3i> modes(n_modes);
    for (size_t i = 0; i < n_modes; ++i) {
      modes[i] = {z_triples[3 * i], z_triples[3 * i + 1], z_triples[3 * i + 2]};
    }
    *out = new qk_lattice{qkin::ModeLattice(box_length, std::move(modes))};
  });
}

void qk_lattice_destroy(qk_lattice* lattice) { delete lattice; }

size_t qk_lattice_mode_count(const qk_lattice* lattice) {
  return lattice != nullptr ? lattice->impl.size() : 0;
}

qk_status qk_lattice_mode(const qk_lattice* lattice, size_t i, int z_out[3]) {
  return guarded([&] {
    require(lattice != nullptr && z_out != nullptr, "null argument");
    require(i < lattice->impl.size(), "mode index out of range");
    const auto& z = lattice->impl.mode(i);
    z_out[0] = z[0];
    z_out[1] = z[1];
    z_out[2] = z[2];
  });
}

qk_status qk_lattice_energy_quantum(const qk_lattice* lattice, size_t i, int64_t* out) {
  return guarded([&] {
    require(lattice != nullptr && out != nullptr, "null argument");
    require(i < lattice->impl.size(), "mode index out of range");
    *out = lattice->impl.energy_quantum(i);
  });
}

qk_status qk_lattice_energy_scale(const qk_lattice* lattice, double mass, double* eps0) {
  return guarded([&] {
    require(lattice != nullptr && eps0 != nullptr, "null argument");
    *eps0 = lattice->impl.energy_scale(mass);
  });
}

/* --------------------------------------------------------------- channels */

qk_status qk_channels_enumerate(const qk_lattice* lattice, size_t max_channels,
                                qk_channels** out) {
  return guarded([&] {
    require(lattice != nullptr && out != nullptr, "null argument");
    const size_t guard = max_channels == 0 ? 10'000'000 : max_channels;
    *out = new qk_channels{qkin::ChannelTable::enumerate(lattice->impl, guard)};
  });
}

void qk_channels_destroy(qk_channels* channels) { delete channels; }

size_t qk_channels_count(const qk_channels* channels) {
  return channels != nullptr ? channels->impl.size() : 0;
}

qk_status qk_channels_get(const qk_channels* channels, size_t c, size_t idx_out[4]) {
  return guarded([&] {
    require(channels != nullptr && idx_out != nullptr, "null argument");
    require(c < channels->impl.size(), "channel index out of range");
    const auto& ch = channels->impl.channel(c);
    for (int k = 0; k < 4; ++k) idx_out[k] = ch.idx[k];
  });
}

/* -------------------------------------------------------------------- kmc */

qk_status qk_kmc_simulate(const qk_lattice* lattice, const qk_channels* channels,
                          const int64_t* occupations, double gamma, double t_end,
                          uint64_t seed, uint64_t stream_index, const double* sample_times,
                          size_t n_samples, int record_modes, qk_kmc_run** out) {
  return guarded([&] {
    require(lattice != nullptr && channels != nullptr && occupations != nullptr &&
                out != nullptr,
            "null argument");
    qkin::kmc::KmcOptions options;
    options.gamma = gamma;
    options.t_end = t_end;
    options.seed = seed;
    options.stream_index = stream_index;
    options.record_modes = record_modes != 0;
    if (sample_times != nullptr) {
      options.sample_times.assign(sample_times, sample_times + n_samples);
    }
    qkin::OccupationConfig initial(
        lattice->impl,
        std::vector<int64_t>(occupations, occupations + lattice->impl.size()));
    *out = new qk_kmc_run{
        qkin::kmc::simulate(lattice->impl, channels->impl, initial, options)};
  });
}

void qk_kmc_run_destroy(qk_kmc_run* run) { delete run; }

size_t qk_kmc_sample_count(const qk_kmc_run* run) {
  return run != nullptr ? run->impl.samples.size() : 0;
}

qk_status qk_kmc_sample(const qk_kmc_run* run, size_t i, double* time, int64_t* n_total,
                        int64_t* e_total, int64_t p_out[3], int64_t* n_zero) {
  return guarded([&] {
    require(run != nullptr, "null run");
    require(i < run->impl.samples.size(), "sample index out of range");
    const auto& s = run->impl.samples[i];
    if (time != nullptr) *time = s.time;
    if (n_total != nullptr) *n_total = s.n_total;
    if (e_total != nullptr) *e_total = s.e_total;
    if (p_out != nullptr) {
      p_out[0] = s.p_total[0];
      p_out[1] = s.p_total[1];
      p_out[2] = s.p_total[2];
    }
    if (n_zero != nullptr) *n_zero = s.n_zero;
  });
}

qk_status qk_kmc_sample_modes(const qk_kmc_run* run, size_t i, int64_t* occ_out) {
  return guarded([&] {
    require(run != nullptr && occ_out != nullptr, "null argument");
    require(i < run->impl.samples.size(), "sample index out of range");
    const auto& occ = run->impl.samples[i].occupations;
    require(!occ.empty(), "run did not record per-mode occupations");
    std::memcpy(occ_out, occ.data(), occ.size() * sizeof(int64_t));
  });
}

uint64_t qk_kmc_digest(const qk_kmc_run* run) {
  return run != nullptr ? run->impl.digest : 0;
}

uint64_t qk_kmc_steps(const qk_kmc_run* run) { return run != nullptr ? run->impl.steps : 0; }

int qk_kmc_truncated(const qk_kmc_run* run) {
  return (run != nullptr && run->impl.truncated) ? 1 : 0;
}

/* ------------------------------------------------- exact stationary state */

qk_status qk_shell_solve(const qk_lattice* lattice, const qk_channels* channels,
                         int64_t n_particles, int64_t energy, const int64_t momentum[3],
                         double gamma, size_t max_states, qk_shell** out) {
  return guarded([&] {
    require(lattice != nullptr && channels != nullptr && momentum != nullptr &&
                out != nullptr,
            "null argument");
    const size_t guard = max_states == 0 ? 200'000 : max_states;
    *out = new qk_shell{
        qkin::kmc::stationary_exact(lattice->impl, channels->impl, n_particles, energy,
                                    {momentum[0], momentum[1], momentum[2]}, gamma, guard),
        lattice};
  });
}

void qk_shell_destroy(qk_shell* shell) { delete shell; }

size_t qk_shell_state_count(const qk_shell* shell) {
  return shell != nullptr ? shell->impl.states.size() : 0;
}

size_t qk_shell_component_count(const qk_shell* shell) {
  return shell != nullptr ? shell->impl.component_count : 0;
}

qk_status qk_shell_state(const qk_shell* shell, size_t i, int64_t* occ_out,
                         uint32_t* component, double* probability) {
  return guarded([&] {
    require(shell != nullptr, "null shell");
    require(i < shell->impl.states.size(), "state index out of range");
    if (occ_out != nullptr) {
      const auto& occ = shell->impl.states[i];
      std::memcpy(occ_out, occ.data(), occ.size() * sizeof(int64_t));
    }
    if (component != nullptr) *component = shell->impl.component[i];
    if (probability != nullptr) *probability = shell->impl.probability[i];
  });
}

qk_status qk_shell_diagnostics(const qk_shell* shell, double* max_uniformity_dev,
                               double* max_balance_residual) {
  return guarded([&] {
    require(shell != nullptr, "null shell");
    if (max_uniformity_dev != nullptr) {
      *max_uniformity_dev = shell->impl.max_uniformity_deviation;
    }
    if (max_balance_residual != nullptr) {
      *max_balance_residual = shell->impl.max_balance_residual;
    }
  });
}

qk_status qk_grand_canonical_weight(const qk_lattice* lattice, double mass,
                                    const int64_t* occupations, double temperature,
                                    double mu, const double drift[3], double* out) {
  return guarded([&] {
    require(lattice != nullptr && occupations != nullptr && drift != nullptr &&
                out != nullptr,
            "null argument");
    qkin::OccupationConfig config(
        lattice->impl,
        std::vector<int64_t>(occupations, occupations + lattice->impl.size()));
    *out = qkin::kmc::grand_canonical_weight(lattice->impl, mass, config, temperature, mu,
                                             {drift[0], drift[1], drift[2]});
  });
}

qk_status qk_grand_canonical_normalizable(const qk_lattice* lattice, double mass,
                                          double temperature, double mu,
                                          const double drift[3], int* out) {
  return guarded([&] {
    require(lattice != nullptr && drift != nullptr && out != nullptr, "null argument");
    *out = qkin::kmc::grand_canonical_normalizable(lattice->impl, mass, temperature, mu,
                                                   {drift[0], drift[1], drift[2]})
               ? 1
               : 0;
  });
}

qk_status qk_mean_occupation_rhs(const qk_lattice* lattice, const qk_channels* channels,
                                 const qk_shell* shell, const double* probabilities,
                                 double gamma, double* rhs_out) {
  return guarded([&] {
    require(lattice != nullptr && channels != nullptr && shell != nullptr &&
                probabilities != nullptr && rhs_out != nullptr,
            "null argument");
    const auto rhs = qkin::kmc::mean_occupation_rhs_exact(
        lattice->impl, channels->impl, shell->impl.states,
        std::span<const double>(probabilities, shell->impl.states.size()), gamma);
    std::memcpy(rhs_out, rhs.data(), rhs.size() * sizeof(double));
  });
}

/* ------------------------------------------------------------- mean field */

qk_status qk_be_field(const qk_lattice* lattice, double mass, double temperature,
                      double mu, double* nbar_out) {
  return guarded([&] {
    require(lattice != nullptr && nbar_out != nullptr, "null argument");
    const auto field =
        qkin::meanfield::be_field(lattice->impl, mass, {temperature, mu});
    std::memcpy(nbar_out, field.data(), field.size() * sizeof(double));
  });
}

qk_status qk_uu_rhs(const qk_lattice* lattice, const qk_channels* channels,
                    const double* nbar, double gamma, double* rhs_out) {
  return guarded([&] {
    require(lattice != nullptr && channels != nullptr && nbar != nullptr &&
                rhs_out != nullptr,
            "null argument");
    const auto rhs = qkin::meanfield::uu_rhs(
        lattice->impl, channels->impl,
        std::span<const double>(nbar, lattice->impl.size()), gamma);
    std::memcpy(rhs_out, rhs.data(), rhs.size() * sizeof(double));
  });
}

size_t qk_series_rows(const qk_series* series) {
  return series != nullptr ? series->rows.size() : 0;
}

size_t qk_series_cols(const qk_series* series) {
  return series != nullptr ? series->labels.size() : 0;
}

qk_status qk_series_value(const qk_series* series, size_t row, size_t col, double* out) {
  return guarded([&] {
    require(series != nullptr && out != nullptr, "null argument");
    require(row < series->rows.size() && col < series->rows[row].size(),
            "series index out of range");
    *out = series->rows[row][col];
  });
}

const char* qk_series_label(const qk_series* series, size_t col) {
  if (series == nullptr || col >= series->labels.size()) return "";
  return series->labels[col].c_str();
}

void qk_series_destroy(qk_series* series) { delete series; }

qk_status qk_uu_integrate(const qk_lattice* lattice, const qk_channels* channels,
                          const double* nbar0, double gamma, double t_end,
                          size_t sample_count, qk_series** out) {
  return guarded([&] {
    require(lattice != nullptr && channels != nullptr && nbar0 != nullptr &&
                out != nullptr,
            "null argument");
    qkin::meanfield::UuOptions options;
    options.gamma = gamma;
    options.t_end = t_end;
    options.sample_count = sample_count;
    const auto series = qkin::meanfield::integrate_uu(
        lattice->impl, channels->impl,
        std::vector<double>(nbar0, nbar0 + lattice->impl.size()), options);

    auto* result = new qk_series;
    result->labels.push_back("time");
    for (std::size_t i = 0; i < lattice->impl.size(); ++i) {
      const auto& z = lattice->impl.mode(i);
      result->labels.push_back("nbar_" + std::to_string(z[0]) + "_" +
                               std::to_string(z[1]) + "_" + std::to_string(z[2]));
    }
    result->labels.push_back("N");
    result->labels.push_back("E");
    for (std::size_t r = 0; r < series.times.size(); ++r) {
      std::vector<double> row;
      row.reserve(lattice->impl.size() + 3);
      row.push_back(series.times[r]);
      row.insert(row.end(), series.fields[r].begin(), series.fields[r].end());
      row.push_back(series.n_totals[r]);
      row.push_back(series.e_totals[r]);
      result->rows.push_back(std::move(row));
    }
    *out = result;
  });
}

qk_status qk_fit_bath(const qk_lattice* lattice, double mass, double n_target,
                      double e_target, double* temperature, double* mu) {
  return guarded([&] {
    require(lattice != nullptr && temperature != nullptr && mu != nullptr,
            "null argument");
    const auto bath =
        qkin::meanfield::fit_bath_from_conserved(lattice->impl, mass, n_target, e_target);
    *temperature = bath.temperature;
    *mu = bath.mu;
  });
}

/* ------------------------------------------------------------- condensate */

qk_status qk_bath_kernels(const qk_lattice* lattice, double mass, double temperature,
                          double mu, double scattering_length, double delta, double eta,
                          const double x[3], double* g_plus, double* g_minus,
                          size_t* triad_count) {
  return guarded([&] {
    require(x != nullptr && g_plus != nullptr && g_minus != nullptr, "null argument");
    const auto model =
        make_model(lattice, mass, temperature, mu, scattering_length, delta, eta);
    const auto sample = qkin::condensate::bath_kernels(model, {x[0], x[1], x[2]});
    *g_plus = sample.g_plus;
    *g_minus = sample.g_minus;
    if (triad_count != nullptr) *triad_count = sample.triad_count;
  });
}

qk_status qk_gain_minus_loss_rate(double temperature, double mu, double scattering_length,
                                  double mass, double* rate) {
  return guarded([&] {
    require(rate != nullptr, "null output");
    *rate = qkin::condensate::gain_minus_loss_rate({temperature, mu}, scattering_length,
                                                   mass);
  });
}

qk_status qk_stationary_rho(double temperature, double mu, double delta, double* rho) {
  return guarded([&] {
    require(rho != nullptr, "null output");
    *rho = qkin::condensate::stationary_rho({temperature, mu}, delta);
  });
}

qk_status qk_condensate_integrate_rho(const qk_lattice* lattice, double mass,
                                      double temperature, double mu,
                                      double scattering_length, double delta, double eta,
                                      double rho0, double t_end, size_t sample_count,
                                      double ceiling_factor, qk_series** out,
                                      int* unbounded) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto model =
        make_model(lattice, mass, temperature, mu, scattering_length, delta, eta);
    const auto series =
        qkin::condensate::integrate_rho(model, rho0, t_end, sample_count, ceiling_factor);
    auto* result = new qk_series;
    result->labels = {"time", "rho"};
    for (std::size_t r = 0; r < series.times.size(); ++r) {
      result->rows.push_back({series.times[r], series.rho[r]});
    }
    *out = result;
    if (unbounded != nullptr) *unbounded = series.unbounded ? 1 : 0;
  });
}

qk_status qk_condensate_integrate_phi(const qk_lattice* lattice, double mass,
                                      double temperature, double mu,
                                      double scattering_length, double delta, double eta,
                                      double phi0_re, double phi0_im, double rho0,
                                      double t_end, size_t sample_count,
                                      int include_gain_loss, qk_series** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto model =
        make_model(lattice, mass, temperature, mu, scattering_length, delta, eta);
    qkin::condensate::PhiOptions options;
    options.include_gain_loss = include_gain_loss != 0;
    options.sample_count = sample_count;
    const auto series = qkin::condensate::integrate_phi(
        model, {phi0_re, phi0_im}, rho0, t_end, options);
    auto* result = new qk_series;
    result->labels = {"time", "phi_re", "phi_im", "phi_abs", "rho"};
    for (std::size_t r = 0; r < series.times.size(); ++r) {
      result->rows.push_back({series.times[r], series.phi[r].real(),
                              series.phi[r].imag(), std::abs(series.phi[r]),
                              series.rho[r]});
    }
    *out = result;
  });
}

qk_status qk_convexity_pairs(size_t n_grid, size_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    size_t pairs = 0;
    for (size_t i = 0; i < n_grid; ++i) {
      for (size_t j = i; j < n_grid; ++j) {
        if (i + j + 1 >= n_grid) break;
        ++pairs;
      }
    }
    *out = pairs;
  });
}

qk_status qk_convexity_gain_check(const double* omega, const double* f, size_t n,
                                  double zero_tolerance, int* verdict, size_t* positive,
                                  size_t* negative, size_t* zero, double* margins_out) {
  return guarded([&] {
    require(omega != nullptr && f != nullptr, "null argument");
    const auto report = qkin::condensate::convexity_gain_check(
        std::span<const double>(omega, n), std::span<const double>(f, n), zero_tolerance);
    if (verdict != nullptr) {
      switch (report.verdict) {
        case qkin::condensate::ConvexityVerdict::kGain: *verdict = QK_CONVEXITY_GAIN; break;
        case qkin::condensate::ConvexityVerdict::kLoss: *verdict = QK_CONVEXITY_LOSS; break;
        case qkin::condensate::ConvexityVerdict::kNeutral:
          *verdict = QK_CONVEXITY_NEUTRAL;
          break;
        case qkin::condensate::ConvexityVerdict::kMixed: *verdict = QK_CONVEXITY_MIXED; break;
      }
    }
    if (positive != nullptr) *positive = report.positive;
    if (negative != nullptr) *negative = report.negative;
    if (zero != nullptr) *zero = report.zero;
    if (margins_out != nullptr) {
      std::memcpy(margins_out, report.margins.data(),
                  report.margins.size() * sizeof(double));
    }
  });
}

qk_status qk_net_gain(const double* omega, const double* nbar, size_t n, double mass,
                      double scattering_length, double* out) {
  return guarded([&] {
    require(omega != nullptr && nbar != nullptr && out != nullptr, "null argument");
    *out = qkin::condensate::net_gain_nonequilibrium(std::span<const double>(omega, n),
                                                     std::span<const double>(nbar, n),
                                                     mass, scattering_length);
  });
}

/* ----------------------------------------------------------------- regime */

double qk_thermal_wavelength(double mass, double temperature) {
  return qkin::regime::thermal_wavelength(mass, temperature);
}

double qk_mean_free_path(double density, double scattering_length) {
  return qkin::regime::mean_free_path(density, scattering_length);
}

qk_status qk_regime_evaluate(const qk_gas_params* params, double threshold,
                             qk_regime_report* out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    qkin::regime::GasParameters gas{params->mass, params->scattering_length,
                                    params->temperature, params->density,
                                    params->cell_size};
    const auto report = qkin::regime::regime_report(gas, threshold);
    const auto convert = [](const qkin::regime::ConditionMargin& margin) {
      return qk_condition{margin.ratio, margin.want_large ? 1 : 0, margin.threshold,
                          margin.pass ? 1 : 0};
    };
    out->lambda_thermal = report.lambda_thermal;
    out->lambda_mfp = report.lambda_mfp;
    out->xi = report.xi;
    out->k_diagonal = report.k_diagonal;
    out->critical_scale = report.critical_scale;
    out->weak_boundary_density = report.weak_boundary_density;
    out->cell_vs_thermal = convert(report.cell_vs_thermal);
    out->mfp_vs_thermal = convert(report.mfp_vs_thermal);
    out->mfp_vs_cell = convert(report.mfp_vs_cell);
    out->k_diagonal_condition = convert(report.k_diagonal_condition);
    out->weak_condensation = convert(report.weak_condensation);
    out->all_pass = report.all_pass ? 1 : 0;
  });
}

const char* qk_regime_inequality_note(void) {
  return "weak condensation classified on l_c <= xi (density bound reading); the "
         "displayed cell-size inequality runs the other way";
}

} /* extern "C" */
