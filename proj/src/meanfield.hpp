#pragma once

#include <span>
#include <vector>

#include "lattice.hpp"

namespace qkin::meanfield {

// Thermal bath in SI units.
struct BathSpec {
  double temperature;  // K
  double mu;           // J
};

// Bose-Einstein mean occupations 1/(exp((hbar omega - mu)/kT) - 1) per mode.
// Requires mu below the lowest mode energy.
std::vector<double> be_field(const ModeLattice& lattice, double mass, const BathSpec& bath);

// Collision term of the discrete Uehling-Uhlenbeck equation.  Each channel
// contributes one flux gamma (1+n1)(1+n2)(1+n3)(1+n4) (x3 x4 - x1 x2) with
// x = n/(1+n), applied as (+1,+1,-1,-1); the factored form keeps the
// Bose-Einstein cancellation at the rounding level.
std::vector<double> uu_rhs(const ModeLattice& lattice, const ChannelTable& channels,
                           std::span<const double> field, double gamma);

struct UuOptions {
  double gamma = 1.0;
  double t_end = 0.0;
  std::size_t sample_count = 51;
  // Per-step relative drift budget on N and E is rel_drift_per_time * dt.
  double rel_drift_per_time = 1e-8;
  double dt_initial = 0.0;  // 0 = t_end / 256
};

struct UuSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
  std::vector<double> n_totals;  // sum of nbar
  std::vector<double> e_totals;  // sum of |z|^2 nbar (units eps0)
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

// Classic fourth-order explicit integration with step halving driven by the
// conservation drift of N and E; throws NumericalError on step underflow
// (dt < 1e-12 t_end).
UuSeries integrate_uu(const ModeLattice& lattice, const ChannelTable& channels,
                      std::vector<double> field0, const UuOptions& options);

double field_number(std::span<const double> field);
double field_energy(const ModeLattice& lattice, std::span<const double> field);

// (T, mu) of the Bose-Einstein field matching the conserved (N, E) of a field,
// found by nested bisection on the monotone maps N(mu; T) and E(T).  e_target
// is in lattice energy-quantum units (the same units field_energy returns).
BathSpec fit_bath_from_conserved(const ModeLattice& lattice, double mass, double n_target,
                                 double e_target);

}  // namespace qkin::meanfield
