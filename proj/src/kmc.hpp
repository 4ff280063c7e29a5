#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lattice.hpp"
#include "occupation.hpp"

namespace qkin::kmc {

// Bose-enhanced transition rates.  Conserving quadruples always have four
// distinct modes, so the plain products are the exact matrix elements.
// rate_minus: n -> n - e (depopulates modes 1,2), gamma n1 n2 (n3+1)(n4+1).
// rate_plus:  n -> n + e (populates modes 1,2), gamma (n1+1)(n2+1) n3 n4.
double rate_minus(const OccupationConfig& config, const CollisionChannel& channel,
                  double gamma);
double rate_plus(const OccupationConfig& config, const CollisionChannel& channel,
                 double gamma);

// Deterministic 64-bit generator stream for trajectory `index` of a study
// seeded with `seed` (splitmix64 mixing).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index = 0);

// Uniform double in [0, 1) from the full 53-bit mantissa; used instead of
// std::uniform_real_distribution so trajectories are identical across
// standard library implementations.
double uniform01(std::mt19937_64& rng);

struct StepResult {
  bool absorbing = false;   // total rate vanished; configuration is frozen
  double waiting_time = 0;  // exponential with the pre-step total rate
  std::uint32_t channel = 0;
  int direction = 0;  // +1 applies +e, -1 applies -e
};

// Gillespie stepper over the channel-direction rate table.  Rates live in a
// binary-indexed (Fenwick) cumulative array: selection is a logarithmic
// prefix-sum descent and a step only refreshes the rates of channels incident
// to the four changed modes.
class KmcStepper {
 public:
  KmcStepper(const ModeLattice& lattice, const ChannelTable& channels,
             OccupationConfig initial, double gamma);

  // Draws the waiting time and the channel-direction move without applying it.
  StepResult propose(std::mt19937_64& rng) const;
  void apply(const StepResult& move);
  // propose + apply in one call.
  StepResult step(std::mt19937_64& rng);

  const OccupationConfig& config() const { return config_; }
  double total_rate() const;

 private:
  void refresh_channel(std::uint32_t c);
  std::size_t select(double target) const;

  const ModeLattice& lattice_;
  const ChannelTable& channels_;
  OccupationConfig config_;
  double gamma_;
  std::vector<double> leaf_;   // 2*c entries: [2c] = plus rate, [2c+1] = minus rate
  std::vector<double> tree_;   // Fenwick array, 1-based
  std::size_t tree_mask_ = 0;  // highest power of two <= leaf count
  std::vector<std::uint64_t> stamp_;
  std::uint64_t stamp_counter_ = 0;
};

struct KmcOptions {
  double gamma = 1.0;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  std::vector<double> sample_times;  // sorted, within [0, t_end]
  bool record_modes = false;         // per-mode occupations at each sample
  std::uint64_t max_steps = 0;       // 0 = unlimited
};

struct KmcSample {
  double time = 0;
  std::int64_t n_total = 0;
  std::int64_t e_total = 0;
  std::array<std::int64_t, 3> p_total{0, 0, 0};
  std::int64_t n_zero = 0;  // occupation of the z = 0 mode, 0 if absent
  std::vector<std::int64_t> occupations;  // only when record_modes
};

struct KmcRun {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  double gamma = 0;
  double t_end = 0;
  std::vector<KmcSample> samples;
  std::uint64_t steps = 0;
  bool truncated = false;  // absorbing state reached before t_end
  std::uint64_t digest = 0;
  std::vector<std::int64_t> final_occupations;
};

// Pure function of (inputs, seed): same arguments, same trajectory.
KmcRun simulate(const ModeLattice& lattice, const ChannelTable& channels,
                const OccupationConfig& initial, const KmcOptions& options);

std::uint64_t fnv1a64(const void* data, std::size_t bytes, std::uint64_t seed);

}  // namespace qkin::kmc
