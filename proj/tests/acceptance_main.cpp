// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerance in code; stochastic checks use
// fixed seeds and are fully deterministic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "basis.hpp"
#include "condensate.hpp"
#include "constants.hpp"
#include "kmc.hpp"
#include "lattice.hpp"
#include "meanfield.hpp"
#include "occupation.hpp"
#include "regime.hpp"
#include "stationary.hpp"

using namespace qkin;

namespace {

constexpr double kSodiumMass = 23.0 * kAtomicMassUnit;
constexpr double kSodiumScattering = 4.9e-9;

struct Criterion {
  int number;
  std::string title;
  std::function<bool(std::string&)> run;
};

ModeLattice acceptance_lattice() {
  return ModeLattice(1.0, {{1, 0, 0},
                           {-1, 0, 0},
                           {0, 1, 0},
                           {0, -1, 0},
                           {0, 0, 1},
                           {0, 0, -1},
                           {1, 1, 0},
                           {-1, -1, 0}});
}

char buffer_text[512];

template <typename... Args>
std::string format(const char* spec, Args... args) {
  std::snprintf(buffer_text, sizeof(buffer_text), spec, args...);
  return buffer_text;
}

// --------------------------------------------------------------------- 1

bool criterion_uniform_shell(std::string& detail) {
  auto lattice = acceptance_lattice();
  auto channels = ChannelTable::enumerate(lattice);

  auto dist = kmc::stationary_exact(lattice, channels, 6, 6, {0, 0, 0});
  if (dist.states.size() != 10 || dist.component_count != 1) {
    detail = format("unexpected shell: %zu states in %zu components", dist.states.size(),
                    dist.component_count);
    return false;
  }
  double max_dev = 0.0;
  for (double p : dist.probability) max_dev = std::max(max_dev, std::abs(p - 0.1));
  if (!(max_dev < 1e-10)) {
    detail = format("null-space deviation from uniform %.3e >= 1e-10", max_dev);
    return false;
  }

  // Time-weighted occupancy over >= 1e6 KMC steps against the uniform law.
  std::map<std::vector<std::int64_t>, std::size_t> index;
  for (std::size_t i = 0; i < dist.states.size(); ++i) index[dist.states[i]] = i;

  kmc::KmcStepper stepper(lattice, channels, OccupationConfig(lattice, dist.states[0]),
                          1.0);
  auto rng = kmc::make_stream(612, 0);
  std::vector<double> occupancy(dist.states.size(), 0.0);
  const std::size_t burn_in = 10'000;
  const std::size_t samples = 1'200'000;
  for (std::size_t step = 0; step < burn_in + samples; ++step) {
    const auto move = stepper.propose(rng);
    if (move.absorbing) {
      detail = "chain unexpectedly absorbed";
      return false;
    }
    if (step >= burn_in) {
      occupancy[index.at(stepper.config().occupations())] += move.waiting_time;
    }
    stepper.apply(move);
  }
  double total = 0.0;
  for (double w : occupancy) total += w;
  double tv = 0.0;
  for (double w : occupancy) tv += std::abs(w / total - 0.1);
  tv *= 0.5;
  detail = format("null-space dev %.2e, empirical TV %.4f over %zu samples", max_dev, tv,
                  samples);
  return tv < 0.02;
}

// --------------------------------------------------------------------- 2

bool criterion_rate_identity(std::string& detail) {
  auto lattice = ModeLattice::cube(1.0, 1);
  auto channels = ChannelTable::enumerate(lattice);
  auto rng = kmc::make_stream(20260809, 1);
  std::size_t checked = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<std::int64_t> n(lattice.size());
    for (auto& x : n) x = static_cast<std::int64_t>(rng() % 40);
    const auto& ch = channels.channel(rng() % channels.size());
    OccupationConfig config(lattice, n);
    if (config.occupation(ch.idx[0]) < 1 || config.occupation(ch.idx[1]) < 1) continue;
    const double backward = kmc::rate_minus(config, ch, 1.0);
    OccupationConfig lowered = config;
    lowered.apply(lattice, ch, -1);
    const double forward = kmc::rate_plus(lowered, ch, 1.0);
    if (forward != backward) {
      detail = format("identity violated at trial %d: %.17g != %.17g", trial, forward,
                      backward);
      return false;
    }
    ++checked;
  }
  detail = format("exact equality on %zu randomized cases", checked);
  return checked > 9'000;
}

// --------------------------------------------------------------------- 3

bool criterion_conservation(std::string& detail) {
  auto lattice = ModeLattice::cube(1.0, 1);
  auto channels = ChannelTable::enumerate(lattice);
  std::vector<std::int64_t> n(lattice.size(), 0);
  n[*lattice.find({1, 0, 0})] = 8;
  n[*lattice.find({-1, 0, 0})] = 8;
  n[*lattice.find({1, 1, 1})] = 4;
  n[*lattice.find({-1, -1, -1})] = 4;
  OccupationConfig config(lattice, n);
  const auto n0 = config.particle_count();
  const auto e0 = config.energy();
  const auto p0 = config.momentum();

  kmc::KmcStepper stepper(lattice, channels, config, 1.0);
  auto rng = kmc::make_stream(31415, 0);
  for (std::size_t step = 0; step < 1'000'000; ++step) {
    if (stepper.step(rng).absorbing) {
      detail = "chain unexpectedly absorbed";
      return false;
    }
  }
  const bool integers_exact = stepper.config().particle_count() == n0 &&
                              stepper.config().energy() == e0 &&
                              stepper.config().momentum() == p0 &&
                              stepper.config().caches_consistent(lattice);
  if (!integers_exact) {
    detail = "integer invariants drifted over 1e6 KMC steps";
    return false;
  }

  std::vector<double> field0(lattice.size(), 0.0);
  field0[*lattice.find({1, 0, 0})] = 8.0;
  field0[*lattice.find({-1, 0, 0})] = 8.0;
  field0[*lattice.find({0, 1, 1})] = 4.0;
  field0[*lattice.find({0, -1, -1})] = 4.0;
  meanfield::UuOptions options;
  options.t_end = 2.0;
  options.sample_count = 9;
  auto series = meanfield::integrate_uu(lattice, channels, field0, options);
  const double n_start = meanfield::field_number(field0);
  const double e_start = meanfield::field_energy(lattice, field0);
  double drift = 0.0;
  for (std::size_t r = 0; r < series.times.size(); ++r) {
    drift = std::max(drift, std::abs(series.n_totals[r] - n_start) / n_start);
    drift = std::max(drift, std::abs(series.e_totals[r] - e_start) / e_start);
  }
  detail = format("KMC invariants exact over 1e6 steps; max UU drift %.2e", drift);
  return drift < 1e-6;
}

// --------------------------------------------------------------------- 4

bool criterion_be_fixed_point(std::string& detail) {
  auto lattice = ModeLattice::cube(1.0e-6, 1);
  auto channels = ChannelTable::enumerate(lattice);
  const double eps0 = lattice.energy_scale(kSodiumMass);
  auto rng = kmc::make_stream(2026, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double kt = eps0 * (0.5 + 4.0 * kmc::uniform01(rng));
    const double gap = 0.7 + 3.3 * kmc::uniform01(rng);
    auto field = meanfield::be_field(lattice, kSodiumMass,
                                     {kt / kBoltzmann, -gap * kt});
    const auto rhs = meanfield::uu_rhs(lattice, channels, field, 1.0);
    for (double r : rhs) worst = std::max(worst, std::abs(r));
  }
  detail = format("max |rhs| %.3e over 20 random (T, mu)", worst);
  return worst < 1e-12;
}

// --------------------------------------------------------------------- 5

bool criterion_mean_occupation(std::string& detail) {
  auto lattice = acceptance_lattice();
  auto channels = ChannelTable::enumerate(lattice);

  auto dist = kmc::stationary_exact(lattice, channels, 6, 6, {0, 0, 0});
  const auto rhs_stationary =
      kmc::mean_occupation_rhs_exact(lattice, channels, dist.states, dist.probability, 1.0);
  double worst = 0.0;
  for (double r : rhs_stationary) worst = std::max(worst, std::abs(r));
  if (!(worst < 1e-9)) {
    detail = format("stationary rhs %.3e >= 1e-9", worst);
    return false;
  }

  // Ensemble derivative from 1e4 trajectories over a short horizon.
  std::vector<std::int64_t> n0(lattice.size(), 0);
  n0[*lattice.find({1, 0, 0})] = 3;
  n0[*lattice.find({-1, 0, 0})] = 3;
  OccupationConfig config(lattice, n0);
  std::vector<std::vector<std::int64_t>> states{n0};
  std::vector<double> probability{1.0};
  const auto rhs =
      kmc::mean_occupation_rhs_exact(lattice, channels, states, probability, 1.0);

  double total_rate = 0.0;
  for (const auto& ch : channels.channels()) {
    total_rate += kmc::rate_plus(config, ch, 1.0) + kmc::rate_minus(config, ch, 1.0);
  }
  const double horizon = 0.02 / total_rate;
  const int trajectories = 10'000;
  kmc::KmcOptions options;
  options.t_end = horizon;
  options.seed = 271828;
  options.sample_times = {horizon};
  options.record_modes = true;
  std::vector<double> sum(lattice.size(), 0.0), sum_sq(lattice.size(), 0.0);
  for (int t = 0; t < trajectories; ++t) {
    options.stream_index = static_cast<std::uint64_t>(t);
    const auto run = kmc::simulate(lattice, channels, config, options);
    const auto& last = run.samples.back().occupations;
    for (std::size_t i = 0; i < last.size(); ++i) {
      const double d = static_cast<double>(last[i] - n0[i]) / horizon;
      sum[i] += d;
      sum_sq[i] += d * d;
    }
  }
  double worst_z = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double mean = sum[i] / trajectories;
    const double variance = (sum_sq[i] / trajectories - mean * mean) /
                            static_cast<double>(trajectories - 1);
    const double sigma = std::sqrt(std::max(variance, 1e-300));
    if (sigma > 1e-200) {
      worst_z = std::max(worst_z, std::abs(mean - rhs[i]) / sigma);
    } else if (std::abs(mean - rhs[i]) > 1e-12) {
      detail = format("mode %zu: zero variance but mismatch %.3e", i,
                      std::abs(mean - rhs[i]));
      return false;
    }
  }
  detail = format("stationary rhs %.2e; ensemble |z| max %.2f sigma over %d trajectories",
                  worst, worst_z, trajectories);
  return worst_z < 3.0;
}

// --------------------------------------------------------------------- 6

bool criterion_m_delta(std::string& detail) {
  const double delta = 1.0;
  const auto center = basis::m_delta_oracle_1d(delta, 0.0);
  const auto up = basis::m_delta_oracle_1d(delta, delta);
  const auto down = basis::m_delta_oracle_1d(delta, -delta);
  const double ratio_up = up.value / center.value;
  const double ratio_down = down.value / center.value;
  const double center_expected = (2.0 / 3.0) * std::pow(delta / kPi, 3);
  const double center_err = std::abs(center.value - center_expected) / center_expected;
  detail = format("ratios %.4f / %.4f (target 0.25), center vs 2/3 weight err %.2e",
                  ratio_up, ratio_down, center_err);
  return std::abs(ratio_up - 0.25) / 0.25 < 0.02 &&
         std::abs(ratio_down - 0.25) / 0.25 < 0.02 && center_err < 0.02;
}

// --------------------------------------------------------------------- 7

bool criterion_kms(std::string& detail) {
  auto lattice = ModeLattice::cube(6.0e-7, 2);
  const double eps0 = lattice.energy_scale(kSodiumMass);
  auto rng = kmc::make_stream(777, 7);
  double worst = 0.0;
  for (int pair = 0; pair < 5; ++pair) {
    condensate::BathModel model;
    model.lattice = &lattice;
    model.mass = kSodiumMass;
    const double kt = eps0 * (1.0 + 2.0 * kmc::uniform01(rng));
    const double mu = -(0.2 + 2.0 * kmc::uniform01(rng)) * kt;
    model.bath = {kt / kBoltzmann, mu};
    model.scattering_length = kSodiumScattering;
    model.delta = kPi / 1e-5;
    const double expected = std::exp(mu / kt);
    for (int i = 0; i < 10; ++i) {
      const std::array<double, 3> x{3e-6 * (kmc::uniform01(rng) - 0.5),
                                    3e-6 * (kmc::uniform01(rng) - 0.5),
                                    3e-6 * (kmc::uniform01(rng) - 0.5)};
      const auto sample = condensate::bath_kernels(model, x);
      if (sample.empty || sample.g_minus == 0.0) {
        detail = "no triads inside the energy window";
        return false;
      }
      worst = std::max(worst,
                       std::abs(sample.g_plus / sample.g_minus - expected) / expected);
    }
  }
  detail = format("max relative KMS residual %.3e over 5 baths x 10 displacements", worst);
  return worst < 1e-10;
}

// --------------------------------------------------------------------- 8

bool criterion_condensate_stationarity(std::string& detail) {
  auto lattice = ModeLattice::cube(6.0e-7, 2);
  const double eps0 = lattice.energy_scale(kSodiumMass);
  condensate::BathModel model;
  model.lattice = &lattice;
  model.mass = kSodiumMass;
  const double kt = 1.5 * eps0;
  model.bath = {kt / kBoltzmann, -kt};  // mu / kT = -1
  model.scattering_length = kSodiumScattering;
  model.delta = kPi / 1e-5;

  const double target = condensate::stationary_rho(model.bath, model.delta);
  const double relax = condensate::integrate_rho(model, 0.0, 1e-9, 2).relaxation_rate;
  auto rho_series = condensate::integrate_rho(model, 0.0, 16.0 / relax, 41);
  const double rho_err = std::abs(rho_series.rho.back() - target) / target;
  if (!(rho_err < 1e-6) || rho_series.unbounded) {
    detail = format("rho converged to relative error %.3e (want < 1e-6)", rho_err);
    return false;
  }

  auto growth_model = model;
  growth_model.bath.mu = 0.0;
  const double g0 = std::pow(model.delta / kPi, 3);
  auto short_run = condensate::integrate_rho(growth_model, 0.0, 1.0e-3, 3, 1e6);
  const double ramp = short_run.rho.back() / short_run.times.back();
  auto growth = condensate::integrate_rho(growth_model, 0.0, 2e6 * g0 / ramp, 101, 1e6);
  bool monotone = true;
  for (std::size_t i = 1; i < growth.rho.size(); ++i) {
    monotone = monotone && growth.rho[i] >= growth.rho[i - 1];
  }
  if (!growth.unbounded || !monotone) {
    detail = format("mu = 0 growth: unbounded=%d monotone=%d", growth.unbounded ? 1 : 0,
                    monotone ? 1 : 0);
    return false;
  }

  auto phi_probe = condensate::integrate_phi(model, {1.0, 0.0}, 0.0, 1e-6);
  if (!(phi_probe.gain_loss_rate < 0.0)) {
    detail = "gain-loss rate not negative for mu < 0";
    return false;
  }
  const double t_end = 16.0 / -phi_probe.gain_loss_rate;
  auto phi_series = condensate::integrate_phi(model, {1.0, 0.0}, 0.0, t_end);
  const double final_modulus = std::abs(phi_series.phi.back());
  detail = format("rho err %.2e; mu=0 ceiling status ok; |phi| end/start %.2e", rho_err,
                  final_modulus);
  return final_modulus < 1e-6;
}

// --------------------------------------------------------------------- 9

bool criterion_gain(std::string& detail) {
  const double kt = 1.0;
  const double lambda = 0.15;
  const std::size_t n = 40;
  const double domega = 0.11;
  std::vector<double> omega(n), f(n);
  for (std::size_t k = 0; k < n; ++k) {
    omega[k] = domega * static_cast<double>(k + 1);
    f[k] = (-omega[k] - lambda * omega[k] * omega[k]) / kt;
  }
  const auto report = condensate::convexity_gain_check(omega, f, 0.0);
  if (report.verdict != condensate::ConvexityVerdict::kGain) {
    detail = "quadratic family not classified as gain";
    return false;
  }
  double worst = 0.0;
  std::size_t pair = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (i + j + 1 >= n) break;
      const double expected = 2.0 * lambda * omega[i] * omega[j] / kt;
      worst = std::max(worst, std::abs(report.margins[pair] - expected) / expected);
      ++pair;
    }
  }
  if (!(worst < 1e-12)) {
    detail = format("margin mismatch %.3e >= 1e-12", worst);
    return false;
  }

  std::vector<double> nbar_gain(n), nbar_eq(n), nbar_ref(n);
  for (std::size_t k = 0; k < n; ++k) {
    nbar_gain[k] = 1.0 / std::expm1(-f[k]);
    nbar_eq[k] = 1.0 / std::expm1(omega[k] / kt);
    nbar_ref[k] = 1.0 / std::expm1((omega[k] + 0.05 * omega[k] * omega[k]) / kt);
  }
  const double gain =
      condensate::net_gain_nonequilibrium(omega, nbar_gain, kSodiumMass, kSodiumScattering);
  const double zero =
      condensate::net_gain_nonequilibrium(omega, nbar_eq, kSodiumMass, kSodiumScattering);
  const double reference =
      condensate::net_gain_nonequilibrium(omega, nbar_ref, kSodiumMass, kSodiumScattering);
  const double prefactor_zero =
      condensate::gain_minus_loss_rate({1e-6, 0.0}, kSodiumScattering, kSodiumMass);
  detail = format("margins to %.1e; net gain %.3e > 0; equilibrium %.1e (<= 1e-12 rel)",
                  worst, gain, std::abs(zero / reference));
  return gain > 0.0 && prefactor_zero == 0.0 &&
         std::abs(zero) <= 1e-12 * std::abs(reference);
}

// -------------------------------------------------------------------- 10

bool criterion_sodium(std::string& detail) {
  const double lambda_thermal = regime::thermal_wavelength(kSodiumMass, 2e-6);
  const double err_thermal = std::abs(lambda_thermal - 4.8e-7) / 4.8e-7;

  const double paper_mfp = 0.42;
  const double critical =
      std::cbrt(kSodiumScattering * paper_mfp * lambda_thermal);
  const double err_critical = std::abs(critical - 1e-5) / 1e-5;

  const double sigma = 8.0 * kPi * kSodiumScattering * kSodiumScattering;
  const double density = 1.0 / (std::sqrt(2.0) * sigma * paper_mfp);
  regime::GasParameters params{kSodiumMass, kSodiumScattering, 2e-6, density, 1e-5};
  const auto report = regime::regime_report(params);
  const double boundary = report.weak_boundary_density;
  const bool boundary_ok = boundary > 0.5e18 && boundary < 2.0e18;

  detail = format("lambda_T err %.1f%%, critical-scale err %.1f%%, boundary %.2e /m^3",
                  100.0 * err_thermal, 100.0 * err_critical, boundary);
  return err_thermal < 0.10 && err_critical < 0.10 && boundary_ok;
}

// -------------------------------------------------------------------- 11

bool criterion_orthonormality(std::string& detail) {
  const double delta = 1.0;
  const double site_spacing = kPi / delta;

  // Fourier-analytic overlaps: exact Kronecker delta.
  double max_exact = 0.0;
  for (int ma = -1; ma <= 1; ++ma) {
    for (int mb = -1; mb <= 1; ++mb) {
      for (int na = -3; na <= 3; ++na) {
        for (int nb = -3; nb <= 3; ++nb) {
          basis::WaveletIndex a{delta, {2.0 * delta * ma, 0, 0}, {site_spacing * na, 0, 0}};
          basis::WaveletIndex b{delta, {2.0 * delta * mb, 0, 0}, {site_spacing * nb, 0, 0}};
          const auto v = basis::overlap(a, b);
          const double expected = (ma == mb && na == nb) ? 1.0 : 0.0;
          max_exact = std::max(max_exact, std::abs(v - std::complex<double>(expected, 0)));
        }
      }
    }
  }
  if (max_exact != 0.0) {
    detail = format("analytic overlap deviates by %.3e", max_exact);
    return false;
  }

  // Position-space quadrature oracle on a truncated domain.
  auto quadrature = [&](double k_a, double r_a, double k_b, double r_b) {
    const double extent = 1000.0 / delta;
    const double k_max = std::max(std::abs(k_a), std::abs(k_b)) + delta;
    const double step = kPi / (20.0 * k_max);
    auto panels = static_cast<long long>(std::ceil(2.0 * extent / step));
    panels += panels % 2;
    const double h = 2.0 * extent / static_cast<double>(panels);
    std::complex<double> sum = 0.0;
    for (long long i = 0; i <= panels; ++i) {
      const double x = -extent + h * static_cast<double>(i);
      const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * std::conj(basis::wavelet_1d(k_a, r_a, x, delta)) *
             basis::wavelet_1d(k_b, r_b, x, delta);
    }
    return sum * (h / 3.0);
  };
  double max_quadrature = 0.0;
  max_quadrature = std::max(max_quadrature,
                            std::abs(quadrature(0, 0, 0, 0) - std::complex<double>(1, 0)));
  max_quadrature = std::max(max_quadrature, std::abs(quadrature(0, 0, 0, site_spacing)));
  max_quadrature =
      std::max(max_quadrature, std::abs(quadrature(0, 0, 2.0 * delta, 0)));
  max_quadrature = std::max(
      max_quadrature, std::abs(quadrature(2.0 * delta, site_spacing, 2.0 * delta,
                                          site_spacing) -
                               std::complex<double>(1, 0)));
  detail = format("analytic overlaps exact; quadrature oracle max error %.2e",
                  max_quadrature);
  return max_quadrature < 1e-3;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria{
      {1, "uniform stationary shell and KMC total variation", criterion_uniform_shell},
      {2, "rate identity t+(n-e) = t-(n)", criterion_rate_identity},
      {3, "exact KMC conservation and UU drift", criterion_conservation},
      {4, "Bose-Einstein field is a UU fixed point", criterion_be_fixed_point},
      {5, "mean-occupation consistency", criterion_mean_occupation},
      {6, "momentum smearing weights 2/3 : 1/6 : 1/6", criterion_m_delta},
      {7, "KMS ratio of the bath kernels", criterion_kms},
      {8, "condensate stationarity, growth, and amplitude decay",
       criterion_condensate_stationarity},
      {9, "convexity margins and net gain", criterion_gain},
      {10, "sodium worked numbers", criterion_sodium},
      {11, "wavelet orthonormality", criterion_orthonormality},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.number != only) continue;
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%2d] %s  %s (%s)\n", criterion.number, pass ? "PASS" : "FAIL",
                criterion.title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures;
}
