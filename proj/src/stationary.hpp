#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lattice.hpp"
#include "occupation.hpp"

namespace qkin::kmc {

// Exact stationary distribution on one (N, E, P) shell.  `probability` is
// normalized within each connected component of the collision graph.
struct ShellDistribution {
  std::vector<std::vector<std::int64_t>> states;
  std::vector<std::uint32_t> component;  // per state
  std::vector<double> probability;       // per state, sums to 1 per component
  std::size_t component_count = 0;
  std::size_t edge_count = 0;
  double max_uniformity_deviation = 0;  // max |p - 1/size| * size per component
  double max_balance_residual = 0;      // max |t+(n-e) w(n-e) - t-(n) w(n)| / rate scale
};

// Enumerates every configuration with the given integer invariants, builds the
// jump generator from rate_plus/rate_minus, and solves for its null vector.
// Components up to `dense_limit` states go through a dense elimination; larger
// ones are constructed by detailed-balance propagation over a spanning tree
// with every non-tree edge verified.  Throws CapacityError past max_states.
ShellDistribution stationary_exact(const ModeLattice& lattice, const ChannelTable& channels,
                                   std::int64_t n_particles, std::int64_t energy,
                                   const std::array<std::int64_t, 3>& momentum,
                                   double gamma = 1.0, std::size_t max_states = 200'000,
                                   std::size_t dense_limit = 2'000);

// exp(-(E - mu N - u . P) / kT) with physical E and P derived from the lattice.
double grand_canonical_weight(const ModeLattice& lattice, double mass,
                              const OccupationConfig& config, double temperature,
                              double mu, const std::array<double, 3>& drift);

// Whether the grand canonical weight is summable over all configurations:
// hbar omega_i - mu - hbar K_i . u > 0 for every mode.
bool grand_canonical_normalizable(const ModeLattice& lattice, double mass,
                                  double temperature, double mu,
                                  const std::array<double, 3>& drift);

// d<n_a>/dt for every mode under the exact generator, evaluated with exact
// correlators of the supplied distribution (no factorization):
// sum over channels of +-gamma {<(n1+1)(n2+1) n3 n4> - <n1 n2 (n3+1)(n4+1)>}.
std::vector<double> mean_occupation_rhs_exact(
    const ModeLattice& lattice, const ChannelTable& channels,
    std::span<const std::vector<std::int64_t>> states, std::span<const double> probability,
    double gamma);

}  // namespace qkin::kmc
