/* qkinetics — coarse-grained quantum kinetics of a weakly interacting Bose
 * gas: stochastic simulation of the quantum Boltzmann master equation, its
 * factorized Uehling-Uhlenbeck limit, condensate gain/loss kinetics against a
 * thermal bath, the band-limited phase-space basis, and the validity-regime
 * calculator.
 *
 * C API over an opaque-handle C++ core.  Every function that can fail returns
 * a qk_status; qk_last_error() carries a thread-local message for the most
 * recent failure on the calling thread.  Handles are destroyed with their
 * matching *_destroy function; destroy functions accept NULL.
 */
#ifndef QKINETICS_H
#define QKINETICS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QK_API __declspec(dllexport)
#else
#define QK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qk_status {
  QK_OK = 0,
  QK_ERR_INVALID_ARGUMENT = 1, /* bad input, off-grid value, validation failure */
  QK_ERR_DOMAIN = 2,           /* parameter outside the physical domain */
  QK_ERR_CAPACITY = 3,         /* state space or channel guard exceeded */
  QK_ERR_NUMERICAL = 4,        /* quadrature/integrator/solver failure */
  QK_ERR_INTERNAL = 5
} qk_status;

QK_API const char* qk_status_name(qk_status status);
QK_API const char* qk_last_error(void);
QK_API const char* qk_version(void);

/* ------------------------------------------------------------------ basis */

/* One-dimensional cell function at position x: out[0] = Re, out[1] = Im.
 * band is the band center K, site the cell center r = n pi / delta. */
QK_API qk_status qk_wavelet_eval(double band, double site, double x, double delta,
                                 double out[2]);

/* Momentum-domain inner product of two cell functions (exact Kronecker
 * delta); band/site are per-axis triples. */
QK_API qk_status qk_wavelet_overlap(const double band_a[3], const double site_a[3],
                                    const double band_b[3], const double site_b[3],
                                    double delta, double out[2]);

/* Within-band commutator kernel g(x) = (1/pi^3) prod sin(delta x_i)/x_i. */
QK_API qk_status qk_g_kernel(const double x[3], double delta, double* out);

/* Cell spacings dx = pi/delta and dp = 2 delta hbar (product = h). */
QK_API qk_status qk_cell_geometry(double delta, double* dx, double* dp);

/* Momentum smearing weight on the {0, +-delta} lattice; 0 off-lattice. */
QK_API qk_status qk_m_delta_weight(const double q[3], double delta, double* out);

/* Double-quadrature oracle for the one-axis smearing weight at band offset
 * q in {0, +-delta}; residual is a grid-refinement error estimate. */
QK_API qk_status qk_m_delta_oracle_1d(double delta, double q, double* value,
                                      double* residual);

/* ---------------------------------------------------------------- lattice */

typedef struct qk_lattice qk_lattice;

/* All integer modes with |z|_inf <= z_max on a box of the given length. */
QK_API qk_status qk_lattice_create_cube(double box_length, int z_max, qk_lattice** out);

/* Explicit mode list: z_triples holds 3*n_modes ints. Modes are stored in
 * lexicographic order regardless of input order. */
QK_API qk_status qk_lattice_create(double box_length, const int* z_triples,
                                   size_t n_modes, qk_lattice** out);
QK_API void qk_lattice_destroy(qk_lattice* lattice);

QK_API size_t qk_lattice_mode_count(const qk_lattice* lattice);
QK_API qk_status qk_lattice_mode(const qk_lattice* lattice, size_t i, int z_out[3]);
/* |z|^2 in units eps0 = hbar^2 (2 pi / L)^2 / 2m. */
QK_API qk_status qk_lattice_energy_quantum(const qk_lattice* lattice, size_t i,
                                           int64_t* out);
QK_API qk_status qk_lattice_energy_scale(const qk_lattice* lattice, double mass,
                                         double* eps0);

/* --------------------------------------------------------------- channels */

typedef struct qk_channels qk_channels;

/* Enumerates all conservation-satisfying collision quadruples, deduplicated;
 * QK_ERR_CAPACITY past max_channels (0 selects the default guard of 1e7). */
QK_API qk_status qk_channels_enumerate(const qk_lattice* lattice, size_t max_channels,
                                       qk_channels** out);
QK_API void qk_channels_destroy(qk_channels* channels);
QK_API size_t qk_channels_count(const qk_channels* channels);
/* idx_out = (i1, i2, i3, i4); the "+" direction raises modes 1,2. */
QK_API qk_status qk_channels_get(const qk_channels* channels, size_t c,
                                 size_t idx_out[4]);

/* -------------------------------------------------------------------- kmc */

typedef struct qk_kmc_run qk_kmc_run;

/* Exact-conservation kinetic Monte Carlo trajectory.  occupations has one
 * nonnegative entry per lattice mode; sample_times must be sorted within
 * [0, t_end].  record_modes != 0 stores per-mode occupations per sample.
 * Deterministic in (all inputs, seed, stream_index). */
QK_API qk_status qk_kmc_simulate(const qk_lattice* lattice, const qk_channels* channels,
                                 const int64_t* occupations, double gamma, double t_end,
                                 uint64_t seed, uint64_t stream_index,
                                 const double* sample_times, size_t n_samples,
                                 int record_modes, qk_kmc_run** out);
QK_API void qk_kmc_run_destroy(qk_kmc_run* run);

QK_API size_t qk_kmc_sample_count(const qk_kmc_run* run);
QK_API qk_status qk_kmc_sample(const qk_kmc_run* run, size_t i, double* time,
                               int64_t* n_total, int64_t* e_total, int64_t p_out[3],
                               int64_t* n_zero);
/* Only valid when the run recorded per-mode occupations. */
QK_API qk_status qk_kmc_sample_modes(const qk_kmc_run* run, size_t i, int64_t* occ_out);
QK_API uint64_t qk_kmc_digest(const qk_kmc_run* run);
QK_API uint64_t qk_kmc_steps(const qk_kmc_run* run);
/* Nonzero when the trajectory hit an absorbing state before t_end. */
QK_API int qk_kmc_truncated(const qk_kmc_run* run);

/* ------------------------------------------------- exact stationary state */

typedef struct qk_shell qk_shell;

/* Enumerates the (N, E, P) shell, builds the jump generator, and solves for
 * its null vector; probabilities are uniform on each connected component.
 * QK_ERR_CAPACITY past max_states (0 selects the guard of 2e5). */
QK_API qk_status qk_shell_solve(const qk_lattice* lattice, const qk_channels* channels,
                                int64_t n_particles, int64_t energy,
                                const int64_t momentum[3], double gamma,
                                size_t max_states, qk_shell** out);
QK_API void qk_shell_destroy(qk_shell* shell);

QK_API size_t qk_shell_state_count(const qk_shell* shell);
QK_API size_t qk_shell_component_count(const qk_shell* shell);
/* occ_out (mode_count entries) may be NULL when only the metadata is needed;
 * probability is normalized within the state's component. */
QK_API qk_status qk_shell_state(const qk_shell* shell, size_t i, int64_t* occ_out,
                                uint32_t* component, double* probability);
QK_API qk_status qk_shell_diagnostics(const qk_shell* shell, double* max_uniformity_dev,
                                      double* max_balance_residual);

/* exp(-(E - mu N - u . P)/kT) for one configuration. */
QK_API qk_status qk_grand_canonical_weight(const qk_lattice* lattice, double mass,
                                           const int64_t* occupations, double temperature,
                                           double mu, const double drift[3], double* out);
/* 1 when the weight is summable over all configurations, else 0. */
QK_API qk_status qk_grand_canonical_normalizable(const qk_lattice* lattice, double mass,
                                                 double temperature, double mu,
                                                 const double drift[3], int* out);

/* d<n_a>/dt for every mode under the exact generator and the distribution
 * given by `probabilities` over the shell states. */
QK_API qk_status qk_mean_occupation_rhs(const qk_lattice* lattice,
                                        const qk_channels* channels, const qk_shell* shell,
                                        const double* probabilities, double gamma,
                                        double* rhs_out);

/* ------------------------------------------------------------- mean field */

/* Bose-Einstein field nbar = 1/(exp((hbar w - mu)/kT) - 1) per mode. */
QK_API qk_status qk_be_field(const qk_lattice* lattice, double mass, double temperature,
                             double mu, double* nbar_out);

/* Discrete Uehling-Uhlenbeck collision term for a mean-occupation field. */
QK_API qk_status qk_uu_rhs(const qk_lattice* lattice, const qk_channels* channels,
                           const double* nbar, double gamma, double* rhs_out);

typedef struct qk_series qk_series;

QK_API size_t qk_series_rows(const qk_series* series);
QK_API size_t qk_series_cols(const qk_series* series);
QK_API qk_status qk_series_value(const qk_series* series, size_t row, size_t col,
                                 double* out);
QK_API const char* qk_series_label(const qk_series* series, size_t col);
QK_API void qk_series_destroy(qk_series* series);

/* Fourth-order integration of the Uehling-Uhlenbeck equation with step
 * control on the N and E drift.  Columns: time, nbar per mode, N, E. */
QK_API qk_status qk_uu_integrate(const qk_lattice* lattice, const qk_channels* channels,
                                 const double* nbar0, double gamma, double t_end,
                                 size_t sample_count, qk_series** out);

/* (T, mu) of the Bose-Einstein field carrying the given (N, E); E in units
 * of eps0. */
QK_API qk_status qk_fit_bath(const qk_lattice* lattice, double mass, double n_target,
                             double e_target, double* temperature, double* mu);

/* ------------------------------------------------------------- condensate */

/* Thermal-bath feeding/loss kernels at displacement x from the discrete triad
 * sums; g_plus/g_minus satisfy g_plus = exp(mu/kT) g_minus.  eta < 0 selects
 * the default window of half the lattice energy quantum.  triad_count = 0
 * with QK_OK means no triads fell inside the window (kernels are zero). */
QK_API qk_status qk_bath_kernels(const qk_lattice* lattice, double mass,
                                 double temperature, double mu, double scattering_length,
                                 double delta, double eta, const double x[3],
                                 double* g_plus, double* g_minus, size_t* triad_count);

/* Continuum gain-minus-loss rate; zero at mu = 0, negative for mu < 0. */
QK_API qk_status qk_gain_minus_loss_rate(double temperature, double mu,
                                         double scattering_length, double mass,
                                         double* rate);

/* Stationary condensate density g(0)/(1 - exp(mu/kT)); requires mu < 0. */
QK_API qk_status qk_stationary_rho(double temperature, double mu, double delta,
                                   double* rho);

/* Mean condensate density evolution; columns: time, rho.  unbounded is set
 * when the density passed ceiling_factor * g(0) (mu = 0 indefinite growth). */
QK_API qk_status qk_condensate_integrate_rho(const qk_lattice* lattice, double mass,
                                             double temperature, double mu,
                                             double scattering_length, double delta,
                                             double eta, double rho0, double t_end,
                                             size_t sample_count, double ceiling_factor,
                                             qk_series** out, int* unbounded);

/* Condensate amplitude evolution; columns: time, Re phi, Im phi, |phi|, rho.
 * include_gain_loss = 0 keeps only the coherent rotation terms. */
QK_API qk_status qk_condensate_integrate_phi(const qk_lattice* lattice, double mass,
                                             double temperature, double mu,
                                             double scattering_length, double delta,
                                             double eta, double phi0_re, double phi0_im,
                                             double rho0, double t_end,
                                             size_t sample_count, int include_gain_loss,
                                             qk_series** out);

typedef enum qk_convexity_verdict {
  QK_CONVEXITY_GAIN = 1,
  QK_CONVEXITY_LOSS = -1,
  QK_CONVEXITY_NEUTRAL = 0,
  QK_CONVEXITY_MIXED = 2
} qk_convexity_verdict;

/* Pairwise convexity margins F(w_i) + F(w_j) - F(w_i + w_j) over a uniform
 * grid w_k = k * w_1; margins_out (optional) must hold qk_convexity_pairs
 * entries. */
QK_API qk_status qk_convexity_pairs(size_t n_grid, size_t* out);
QK_API qk_status qk_convexity_gain_check(const double* omega, const double* f, size_t n,
                                         double zero_tolerance, int* verdict,
                                         size_t* positive, size_t* negative, size_t* zero,
                                         double* margins_out);

/* Net bath gain for a tabulated nbar(omega) on a uniform grid. */
QK_API qk_status qk_net_gain(const double* omega, const double* nbar, size_t n,
                             double mass, double scattering_length, double* out);

/* ----------------------------------------------------------------- regime */

typedef struct qk_gas_params {
  double mass;              /* kg */
  double scattering_length; /* m */
  double temperature;       /* K */
  double density;           /* 1/m^3 */
  double cell_size;         /* l_c, m */
} qk_gas_params;

typedef struct qk_condition {
  double ratio;
  int want_large; /* 1: pass when ratio >= threshold; 0: pass when ratio <= 1/threshold */
  double threshold;
  int pass;
} qk_condition;

typedef struct qk_regime_report {
  double lambda_thermal;
  double lambda_mfp;
  double xi;
  double k_diagonal;
  double critical_scale;
  double weak_boundary_density;
  qk_condition cell_vs_thermal;
  qk_condition mfp_vs_thermal;
  qk_condition mfp_vs_cell;
  qk_condition k_diagonal_condition;
  qk_condition weak_condensation; /* pass when l_c <= xi; see report note */
  int all_pass;
} qk_regime_report;

QK_API double qk_thermal_wavelength(double mass, double temperature);
QK_API double qk_mean_free_path(double density, double scattering_length);
QK_API qk_status qk_regime_evaluate(const qk_gas_params* params, double threshold,
                                    qk_regime_report* out);
/* Static explanatory note for the weak-condensation inequality direction. */
QK_API const char* qk_regime_inequality_note(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QKINETICS_H */
