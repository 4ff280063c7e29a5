#include "condensate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "basis.hpp"
#include "constants.hpp"
#include "errors.hpp"

namespace qkin::condensate {

double contact_coupling(double scattering_length, double mass) {
  if (!(scattering_length > 0.0) || !(mass > 0.0)) {
    throw std::invalid_argument("scattering length and mass must be positive");
  }
  return 4.0 * kPi * kHbar * kHbar * scattering_length / mass;
}

namespace {

void validate_model(const BathModel& model) {
  if (model.lattice == nullptr) throw std::invalid_argument("bath model needs a lattice");
  if (!(model.mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(model.bath.temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  if (!(model.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(model.scattering_length > 0.0)) {
    throw std::invalid_argument("scattering length must be positive");
  }
  if (model.bath.mu > 0.0) {
    throw std::domain_error("condensate bath requires mu <= 0");
  }
}

double g_zero(double delta) {
  const double s = delta / kPi;
  return s * s * s;
}

// Triad sums S+ = sum n1 n2 (n3+1) and S- = sum (n1+1)(n2+1) n3 over K != 0
// modes with K3 = K1 + K2 and |e1 + e2 - e3| <= eta (integer energies).
struct TriadSums {
  double s_plus = 0;
  double s_minus = 0;
  std::size_t count = 0;
};

TriadSums triad_sums(const BathModel& model) {
  const ModeLattice& lattice = *model.lattice;
  const double eps0 = lattice.energy_scale(model.mass);
  const double eta = model.eta < 0.0 ? 0.5 * eps0 : model.eta;
  const double eta_quanta = eta / eps0;
  const double kt = kBoltzmann * model.bath.temperature;

  std::vector<double> nbar(lattice.size(), 0.0);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (lattice.energy_quantum(i) == 0) continue;
    const double e = eps0 * static_cast<double>(lattice.energy_quantum(i));
    nbar[i] = 1.0 / std::expm1((e - model.bath.mu) / kt);
  }

  TriadSums sums;
  for (std::size_t i1 = 0; i1 < lattice.size(); ++i1) {
    if (lattice.energy_quantum(i1) == 0) continue;
    const auto& z1 = lattice.mode(i1);
    for (std::size_t i2 = 0; i2 < lattice.size(); ++i2) {
      if (lattice.energy_quantum(i2) == 0) continue;
      const auto& z2 = lattice.mode(i2);
      const Vec3i z3{z1[0] + z2[0], z1[1] + z2[1], z1[2] + z2[2]};
      const auto i3 = lattice.find(z3);
      if (!i3 || lattice.energy_quantum(*i3) == 0) continue;
      const double mismatch =
          static_cast<double>(lattice.energy_quantum(i1) + lattice.energy_quantum(i2) -
                              lattice.energy_quantum(*i3));
      if (std::abs(mismatch) > eta_quanta) continue;
      sums.s_plus += nbar[i1] * nbar[i2] * (nbar[*i3] + 1.0);
      sums.s_minus += (nbar[i1] + 1.0) * (nbar[i2] + 1.0) * nbar[*i3];
      ++sums.count;
    }
  }
  return sums;
}

}  // namespace

BathKernelSample bath_kernels(const BathModel& model, const std::array<double, 3>& x) {
  validate_model(model);
  const TriadSums sums = triad_sums(model);
  const double u = contact_coupling(model.scattering_length, model.mass);
  const double g = basis::g_kernel(x, model.delta);
  const double prefactor = kPi * u * u / (kHbar * kHbar) * g * g * g;
  BathKernelSample sample;
  sample.triad_count = sums.count;
  sample.empty = sums.count == 0;
  // K3 = K1 + K2 exactly on-lattice, so the phase e^{i(K1+K2-K3).x} is unity.
  sample.g_plus = prefactor * sums.s_plus;
  sample.g_minus = prefactor * sums.s_minus;
  return sample;
}

double gain_minus_loss_rate(const BathSpec& bath, double scattering_length, double mass) {
  if (!(bath.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (bath.mu > 0.0) throw std::domain_error("gain-minus-loss rate requires mu <= 0");
  if (bath.mu == 0.0) return 0.0;  // prefactor e^(mu/kT) - 1 vanishes identically

  const double kt = kBoltzmann * bath.temperature;
  const double m_hat = bath.mu / kt;  // < 0
  // J = int n(t1) n(t2) (1 + n(t1+t2)) dt1 dt2 over t = hbar w / kT.
  const auto occupation = [&](double t) { return 1.0 / std::expm1(t - m_hat); };
  const double t_max = 45.0;
  const std::size_t panels = 512;  // Simpson, even count
  const double h = t_max / static_cast<double>(panels);
  auto weight = [&](std::size_t i) {
    return (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  };
  double j = 0.0;
  for (std::size_t i1 = 0; i1 <= panels; ++i1) {
    const double t1 = h * static_cast<double>(i1);
    double inner = 0.0;
    for (std::size_t i2 = 0; i2 <= panels; ++i2) {
      const double t2 = h * static_cast<double>(i2);
      inner += weight(i2) * occupation(t2) * (1.0 + occupation(t1 + t2));
    }
    j += weight(i1) * occupation(t1) * inner * (h / 3.0);
  }
  j *= h / 3.0;

  const double u = contact_coupling(scattering_length, mass);
  const double omega_scale = kt / kHbar;
  const double j_omega = j * omega_scale * omega_scale;
  const double prefactor =
      4.0 * u * u * mass * mass * mass / (std::pow(kHbar, 5) * std::pow(kPi, 3));
  return std::expm1(m_hat) * prefactor * j_omega;
}

double stationary_rho(const BathSpec& bath, double delta) {
  if (!(bath.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(bath.mu < 0.0)) {
    throw std::domain_error("stationary density exists only for mu < 0");
  }
  const double q = std::exp(bath.mu / (kBoltzmann * bath.temperature));
  return g_zero(delta) / (1.0 - q);
}

namespace {

// Spatial kernel moment A = 2 int G+(s) g(s) d^3 s.  With the triad phase
// unity, G+(s) = (pi u^2 / hbar^2) S+ g(s)^3, and the per-axis moment
// int g_1^4 ds = (2/3)(delta/pi)^3 gives int g^4 d^3 s = (8/27)(delta/pi)^9.
double rho_kernel_moment(const BathModel& model, const TriadSums& sums) {
  const double u = contact_coupling(model.scattering_length, model.mass);
  const double per_axis = (2.0 / 3.0) * g_zero(model.delta);
  const double g4_moment = per_axis * per_axis * per_axis;
  return 2.0 * kPi * u * u / (kHbar * kHbar) * sums.s_plus * g4_moment;
}

}  // namespace

RhoSeries integrate_rho(const BathModel& model, double rho0, double t_end,
                        std::size_t sample_count, double ceiling_factor) {
  validate_model(model);
  if (!(rho0 >= 0.0)) throw std::invalid_argument("rho0 must be nonnegative");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (sample_count < 2) throw std::invalid_argument("need at least two samples");

  const TriadSums sums = triad_sums(model);
  const double a = rho_kernel_moment(model, sums);
  const double g0 = g_zero(model.delta);
  const double q_minus_1 = std::expm1(model.bath.mu / (kBoltzmann * model.bath.temperature));
  const double slope = a * q_minus_1 / g0;  // <= 0
  const double ceiling = ceiling_factor * g0;

  const auto rhs = [&](double rho) { return slope * rho + a; };

  RhoSeries series;
  series.relaxation_rate = -slope;
  // Step resolves the relaxation rate (mu < 0) or the linear ramp (mu = 0).
  double dt;
  if (slope < 0.0) {
    dt = 0.01 / -slope;
  } else if (a > 0.0) {
    dt = (ceiling - rho0) / a / 1000.0;
  } else {
    dt = t_end / 1000.0;
  }
  dt = std::min(dt, t_end / static_cast<double>(sample_count - 1));

  double rho = rho0;
  double t = 0.0;
  const double sample_dt = t_end / static_cast<double>(sample_count - 1);
  std::size_t next_sample = 0;
  auto record = [&] {
    series.times.push_back(sample_dt * static_cast<double>(next_sample));
    series.rho.push_back(rho);
    ++next_sample;
  };
  record();
  while (next_sample < sample_count) {
    const double target = sample_dt * static_cast<double>(next_sample);
    const double step = std::min(dt, target - t);
    const double k1 = rhs(rho);
    const double k2 = rhs(rho + 0.5 * step * k1);
    const double k3 = rhs(rho + 0.5 * step * k2);
    const double k4 = rhs(rho + step * k3);
    rho += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += step;
    if (t >= target - 1e-15 * t_end) record();
    if (rho > ceiling) {
      series.unbounded = true;
      break;
    }
  }
  return series;
}

PhiSeries integrate_phi(const BathModel& model, std::complex<double> phi0, double rho0,
                        double t_end, const PhiOptions& options) {
  validate_model(model);
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (options.sample_count < 2) throw std::invalid_argument("need at least two samples");

  const ModeLattice& lattice = *model.lattice;
  const double u = contact_coupling(model.scattering_length, model.mass);
  const double g0 = g_zero(model.delta);
  const double kt = kBoltzmann * model.bath.temperature;
  const double eps0 = lattice.energy_scale(model.mass);

  double bath_sum = 0.0;  // sum over K != 0 of nbar_K
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (lattice.energy_quantum(i) == 0) continue;
    const double e = eps0 * static_cast<double>(lattice.energy_quantum(i));
    bath_sum += 1.0 / std::expm1((e - model.bath.mu) / kt);
  }

  const double gain =
      options.include_gain_loss
          ? gain_minus_loss_rate(model.bath, model.scattering_length, model.mass)
          : 0.0;

  const TriadSums sums = triad_sums(model);
  const double a = rho_kernel_moment(model, sums);
  const double q_minus_1 = std::expm1(model.bath.mu / kt);
  const double rho_slope = a * q_minus_1 / g0;

  PhiSeries series;
  series.gain_loss_rate = gain;
  series.coherent_rate = (u * g0 * bath_sum + 2.0 * u * rho0) / kHbar;

  // The homogeneous convolution of g against a constant integrates to one, so
  // the closure term enters as 2 u rho phi.
  const auto phi_rate = [&](std::complex<double> phi, double rho) {
    const double rotation = (u * g0 * bath_sum + 2.0 * u * rho) / kHbar;
    return std::complex<double>(gain, -rotation) * phi;
  };
  const auto rho_rate = [&](double rho) { return rho_slope * rho + a; };

  const double rotation0 = std::abs(series.coherent_rate);
  double dt = options.dt;
  if (!(dt > 0.0)) {
    const double period = rotation0 > 0.0 ? 2.0 * kPi / rotation0 : t_end;
    dt = std::min(period / 200.0, t_end / 1000.0);
  }

  const double sample_dt = t_end / static_cast<double>(options.sample_count - 1);
  std::complex<double> phi = phi0;
  double rho = rho0;
  double t = 0.0;
  std::size_t next_sample = 0;
  auto record = [&] {
    series.times.push_back(sample_dt * static_cast<double>(next_sample));
    series.phi.push_back(phi);
    series.rho.push_back(rho);
    ++next_sample;
  };
  record();
  while (next_sample < options.sample_count) {
    const double target = sample_dt * static_cast<double>(next_sample);
    const double step = std::min(dt, target - t);
    const auto p1 = phi_rate(phi, rho);
    const double r1 = rho_rate(rho);
    const auto p2 = phi_rate(phi + 0.5 * step * p1, rho + 0.5 * step * r1);
    const double r2 = rho_rate(rho + 0.5 * step * r1);
    const auto p3 = phi_rate(phi + 0.5 * step * p2, rho + 0.5 * step * r2);
    const double r3 = rho_rate(rho + 0.5 * step * r2);
    const auto p4 = phi_rate(phi + step * p3, rho + step * r3);
    const double r4 = rho_rate(rho + step * r3);
    phi += step / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
    rho += step / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
    t += step;
    if (t >= target - 1e-15 * t_end) record();
  }
  return series;
}

ConvexityReport convexity_gain_check(std::span<const double> omega, std::span<const double> f,
                                     double zero_tolerance) {
  if (omega.size() != f.size() || omega.size() < 2) {
    throw std::invalid_argument("need matching omega and F tables with at least two rows");
  }
  for (double x : f) {
    if (!std::isfinite(x)) throw std::invalid_argument("F must be finite on the grid");
  }
  const std::size_t n = omega.size();
  const double domega = omega[0];
  if (!(domega > 0.0)) throw std::invalid_argument("omega grid must start at domega > 0");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = domega * static_cast<double>(k + 1);
    if (std::abs(omega[k] - expected) > 1e-9 * expected) {
      throw std::invalid_argument("omega grid must be uniform multiples of its first entry");
    }
  }

  ConvexityReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.max_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t sum_index = i + j + 1;  // (i+1) + (j+1) quanta
      if (sum_index >= n) break;
      const double margin = f[i] + f[j] - f[sum_index];
      report.margins.push_back(margin);
      ++report.pairs;
      if (margin > zero_tolerance) {
        ++report.positive;
      } else if (margin < -zero_tolerance) {
        ++report.negative;
      } else {
        ++report.zero;
      }
      report.min_margin = std::min(report.min_margin, margin);
      report.max_margin = std::max(report.max_margin, margin);
    }
  }
  if (report.pairs == 0) {
    report.verdict = ConvexityVerdict::kNeutral;
    report.min_margin = report.max_margin = 0.0;
  } else if (report.positive == report.pairs) {
    report.verdict = ConvexityVerdict::kGain;
  } else if (report.negative == report.pairs) {
    report.verdict = ConvexityVerdict::kLoss;
  } else if (report.zero == report.pairs) {
    report.verdict = ConvexityVerdict::kNeutral;
  } else {
    report.verdict = ConvexityVerdict::kMixed;
  }
  return report;
}

double net_gain_nonequilibrium(std::span<const double> omega, std::span<const double> nbar,
                               double mass, double scattering_length) {
  if (omega.size() != nbar.size() || omega.size() < 2) {
    throw std::invalid_argument("need matching omega and nbar tables with at least two rows");
  }
  const std::size_t n = omega.size();
  const double domega = omega[0];
  if (!(domega > 0.0)) throw std::invalid_argument("omega grid must start at domega > 0");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = domega * static_cast<double>(k + 1);
    if (std::abs(omega[k] - expected) > 1e-9 * expected) {
      throw std::invalid_argument("omega grid must be uniform multiples of its first entry");
    }
    if (!(nbar[k] >= 0.0)) throw std::invalid_argument("nbar must be nonnegative");
  }

  // Trapezoid over the triangle w1 + w2 <= w_max in the energy variables;
  // K dK = (m/hbar) dw turns the perpendicular-constraint integral into a
  // plain double integral over (w1, w2).
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t sum_index = i + j + 1;
      if (sum_index >= n) break;
      const double wj = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
      const double n1 = nbar[i];
      const double n2 = nbar[j];
      const double n3 = nbar[sum_index];
      const double x1 = n1 / (1.0 + n1);
      const double x2 = n2 / (1.0 + n2);
      const double x3 = n3 / (1.0 + n3);
      const double forward_minus_backward =
          (1.0 + n1) * (1.0 + n2) * (1.0 + n3) * (x1 * x2 - x3);
      integral += wi * wj * forward_minus_backward;
    }
  }
  integral *= domega * domega;

  const double u = contact_coupling(scattering_length, mass);
  const double prefactor =
      4.0 * u * u * mass * mass * mass / (std::pow(kHbar, 5) * std::pow(kPi, 3));
  return prefactor * integral;
}

}  // namespace qkin::condensate
