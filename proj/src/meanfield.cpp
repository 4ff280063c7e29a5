#include "meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "constants.hpp"
#include "errors.hpp"

namespace qkin::meanfield {

namespace {

void validate_field(std::span<const double> field, std::size_t expected) {
  if (field.size() != expected) {
    throw std::invalid_argument("field length does not match lattice");
  }
  for (double n : field) {
    if (!(n >= -1e-9) || !std::isfinite(n)) {
      throw std::invalid_argument("mean occupations must be nonnegative");
    }
  }
}

// Dimensionless BE occupation with energy and chemical potential in units of
// kT: n = 1/(e^(w) - 1), w = (eps - mu)/kT > 0.
double be_occupation(double w) { return 1.0 / std::expm1(w); }

}  // namespace

std::vector<double> be_field(const ModeLattice& lattice, double mass, const BathSpec& bath) {
  if (!(bath.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  const double kt = kBoltzmann * bath.temperature;
  const double eps0 = lattice.energy_scale(mass);
  double min_energy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    min_energy = std::min(min_energy, eps0 * static_cast<double>(lattice.energy_quantum(i)));
  }
  if (!(bath.mu < min_energy)) {
    throw std::domain_error("mu at or above the lowest mode energy: divergent occupation");
  }
  std::vector<double> field(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double e = eps0 * static_cast<double>(lattice.energy_quantum(i));
    field[i] = be_occupation((e - bath.mu) / kt);
  }
  return field;
}

namespace {

// Collision term without input validation; intermediate integrator stages may
// carry small negative excursions that the step controller later rejects.
std::vector<double> collision_rhs(const ModeLattice& lattice, const ChannelTable& channels,
                                  std::span<const double> field, double gamma) {
  std::vector<double> rhs(lattice.size(), 0.0);
  for (const auto& ch : channels.channels()) {
    const auto [i1, i2, i3, i4] = ch.idx;
    const double n1 = std::max(field[i1], 0.0);
    const double n2 = std::max(field[i2], 0.0);
    const double n3 = std::max(field[i3], 0.0);
    const double n4 = std::max(field[i4], 0.0);
    const double x1 = n1 / (1.0 + n1);
    const double x2 = n2 / (1.0 + n2);
    const double x3 = n3 / (1.0 + n3);
    const double x4 = n4 / (1.0 + n4);
    const double flux = gamma * (1.0 + n1) * (1.0 + n2) * (1.0 + n3) * (1.0 + n4) *
                        (x3 * x4 - x1 * x2);
    rhs[i1] += flux;
    rhs[i2] += flux;
    rhs[i3] -= flux;
    rhs[i4] -= flux;
  }
  return rhs;
}

}  // namespace

std::vector<double> uu_rhs(const ModeLattice& lattice, const ChannelTable& channels,
                           std::span<const double> field, double gamma) {
  validate_field(field, lattice.size());
  return collision_rhs(lattice, channels, field, gamma);
}

double field_number(std::span<const double> field) {
  double n = 0.0;
  for (double x : field) n += x;
  return n;
}

double field_energy(const ModeLattice& lattice, std::span<const double> field) {
  double e = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    e += static_cast<double>(lattice.energy_quantum(i)) * field[i];
  }
  return e;
}

UuSeries integrate_uu(const ModeLattice& lattice, const ChannelTable& channels,
                      std::vector<double> field0, const UuOptions& options) {
  validate_field(field0, lattice.size());
  if (!(options.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (options.sample_count < 2) throw std::invalid_argument("need at least two samples");

  const double n0 = field_number(field0);
  const double e0 = field_energy(lattice, field0);
  const double n_scale = std::max(n0, 1e-300);
  const double e_scale = std::max(e0, 1e-300);

  UuSeries series;
  const std::size_t samples = options.sample_count;
  series.times.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    series.times.push_back(options.t_end * static_cast<double>(i) /
                           static_cast<double>(samples - 1));
  }

  auto derivative = [&](const std::vector<double>& f) {
    return collision_rhs(lattice, channels, f, options.gamma);
  };

  auto rk4 = [&](const std::vector<double>& f, double dt) {
    const std::size_t m = f.size();
    std::vector<double> k1 = derivative(f);
    std::vector<double> tmp(m);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = f[i] + 0.5 * dt * k1[i];
    std::vector<double> k2 = derivative(tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = f[i] + 0.5 * dt * k2[i];
    std::vector<double> k3 = derivative(tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = f[i] + dt * k3[i];
    std::vector<double> k4 = derivative(tmp);
    std::vector<double> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = f[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return next;
  };

  std::vector<double> field = std::move(field0);
  double t = 0.0;
  double dt_nominal = options.dt_initial > 0.0 ? options.dt_initial : options.t_end / 256.0;
  std::size_t next_sample = 0;
  int growth_streak = 0;

  auto record_now = [&] {
    series.fields.push_back(field);
    series.n_totals.push_back(field_number(field));
    series.e_totals.push_back(field_energy(lattice, field));
    ++next_sample;
  };

  record_now();  // t = 0
  if (options.t_end == 0.0) {
    while (next_sample < samples) record_now();
    return series;
  }

  while (next_sample < samples) {
    if (dt_nominal < 1e-12 * options.t_end) {
      throw NumericalError("integrator step underflow: divergence at t = " + std::to_string(t));
    }
    // Land exactly on the next sample time so recorded fields are on-grid.
    const double dt = std::min(dt_nominal, series.times[next_sample] - t);
    std::vector<double> next = rk4(field, dt);

    double min_value = 0.0;
    for (double x : next) min_value = std::min(min_value, x);
    const double n_drift = std::abs(field_number(next) - field_number(field)) / n_scale;
    const double e_drift =
        std::abs(field_energy(lattice, next) - field_energy(lattice, field)) / e_scale;
    const double budget = options.rel_drift_per_time * dt;
    if (min_value < -1e-12 || n_drift > budget || e_drift > budget) {
      dt_nominal *= 0.5;
      growth_streak = 0;
      ++series.rejected_steps;
      continue;
    }
    for (double& x : next) {
      if (x < 0.0) x = 0.0;  // within the -1e-12 band checked above
    }
    field = std::move(next);
    t += dt;
    ++series.accepted_steps;
    if (t >= series.times[next_sample] - 1e-15 * options.t_end) record_now();
    if (++growth_streak >= 8) {
      dt_nominal *= 1.5;
      growth_streak = 0;
    }
  }
  return series;
}

BathSpec fit_bath_from_conserved(const ModeLattice& lattice, double mass, double n_target,
                                 double e_target) {
  if (!(n_target > 0.0)) throw std::invalid_argument("target N must be positive");
  if (!(e_target > 0.0)) throw std::invalid_argument("target E must be positive");
  const double eps0 = lattice.energy_scale(mass);
  const std::size_t m = lattice.size();

  double e_min = std::numeric_limits<double>::infinity();
  double e_mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = static_cast<double>(lattice.energy_quantum(i));
    e_min = std::min(e_min, e);
    e_mean += e;
  }
  e_mean /= static_cast<double>(m);
  // T -> infinity pushes the field toward uniform occupation, so E/N is capped
  // by the mean mode energy; targets above it have no BE representative.
  if (e_target >= 0.999 * n_target * e_mean) {
    throw std::domain_error("target energy too high for a Bose-Einstein field");
  }
  if (e_target <= n_target * e_min) {
    throw std::domain_error("target energy at or below the ground-state line");
  }

  // Dimensionless solve: tau = kT/eps0, m_hat = mu/eps0.
  auto number_at = [&](double tau, double m_hat) {
    double n = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      n += 1.0 / std::expm1((static_cast<double>(lattice.energy_quantum(i)) - m_hat) / tau);
    }
    return n;
  };
  auto energy_at = [&](double tau, double m_hat) {
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double ei = static_cast<double>(lattice.energy_quantum(i));
      e += ei / std::expm1((ei - m_hat) / tau);
    }
    return e;
  };
  auto mu_for_number = [&](double tau) {
    double hi = e_min - 1e-12 * std::max(1.0, tau);
    double lo = e_min - std::max(1.0, tau);
    while (number_at(tau, lo) > n_target) lo = e_min - 2.0 * (e_min - lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (number_at(tau, mid) < n_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  double tau_lo = 1e-6, tau_hi = 1.0;
  while (energy_at(tau_hi, mu_for_number(tau_hi)) < e_target) {
    tau_hi *= 2.0;
    if (tau_hi > 1e12) throw NumericalError("temperature bracket expansion failed");
  }
  while (energy_at(tau_lo, mu_for_number(tau_lo)) > e_target) {
    tau_lo *= 0.5;
    if (tau_lo < 1e-15) throw NumericalError("temperature bracket expansion failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(tau_lo * tau_hi);
    (energy_at(mid, mu_for_number(mid)) < e_target ? tau_lo : tau_hi) = mid;
  }
  const double tau = 0.5 * (tau_lo + tau_hi);
  const double m_hat = mu_for_number(tau);
  return {tau * eps0 / kBoltzmann, m_hat * eps0};
}

}  // namespace qkin::meanfield
