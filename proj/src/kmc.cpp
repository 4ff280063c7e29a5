#include "kmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkin::kmc {

double rate_minus(const OccupationConfig& config, const CollisionChannel& channel,
                  double gamma) {
  const auto [i1, i2, i3, i4] = channel.idx;
  return gamma * static_cast<double>(config.occupation(i1)) *
         static_cast<double>(config.occupation(i2)) *
         static_cast<double>(config.occupation(i3) + 1) *
         static_cast<double>(config.occupation(i4) + 1);
}

double rate_plus(const OccupationConfig& config, const CollisionChannel& channel,
                 double gamma) {
  const auto [i1, i2, i3, i4] = channel.idx;
  return gamma * static_cast<double>(config.occupation(i1) + 1) *
         static_cast<double>(config.occupation(i2) + 1) *
         static_cast<double>(config.occupation(i3)) *
         static_cast<double>(config.occupation(i4));
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xA5A5A5A55A5A5A5AULL + index * 0x9E3779B97F4A7C15ULL);
  const std::uint64_t s = splitmix64(state);
  return std::mt19937_64(s);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t fnv1a64(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

KmcStepper::KmcStepper(const ModeLattice& lattice, const ChannelTable& channels,
                       OccupationConfig initial, double gamma)
    : lattice_(lattice),
      channels_(channels),
      config_(std::move(initial)),
      gamma_(gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (config_.size() != lattice.size()) {
    throw std::invalid_argument("configuration does not match lattice");
  }
  const std::size_t leaves = 2 * channels_.size();
  leaf_.assign(std::max<std::size_t>(leaves, 1), 0.0);
  tree_.assign(leaf_.size() + 1, 0.0);
  tree_mask_ = 1;
  while (tree_mask_ * 2 <= leaf_.size()) tree_mask_ *= 2;
  stamp_.assign(channels_.size(), 0);
  for (std::uint32_t c = 0; c < channels_.size(); ++c) refresh_channel(c);
}

void KmcStepper::refresh_channel(std::uint32_t c) {
  const auto& ch = channels_.channel(c);
  const double plus = rate_plus(config_, ch, gamma_);
  const double minus = rate_minus(config_, ch, gamma_);
  const std::size_t base = 2 * static_cast<std::size_t>(c);
  for (int k = 0; k < 2; ++k) {
    const double value = (k == 0) ? plus : minus;
    const std::size_t leaf = base + k;
    const double delta = value - leaf_[leaf];
    if (delta == 0.0) continue;
    leaf_[leaf] = value;
    for (std::size_t i = leaf + 1; i <= leaf_.size(); i += i & (~i + 1)) {
      tree_[i] += delta;
    }
  }
}

double KmcStepper::total_rate() const {
  double total = 0.0;
  for (std::size_t i = leaf_.size(); i > 0; i -= i & (~i + 1)) total += tree_[i];
  return total;
}

std::size_t KmcStepper::select(double target) const {
  std::size_t pos = 0;
  for (std::size_t step = tree_mask_; step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= leaf_.size() && tree_[next] < target) {
      target -= tree_[next];
      pos = next;
    }
  }
  // pos counts the leaves whose cumulative sum stays below the target.
  std::size_t idx = pos;
  while (idx < leaf_.size() - 1 && leaf_[idx] <= 0.0) ++idx;  // rounding guard
  return idx;
}

StepResult KmcStepper::propose(std::mt19937_64& rng) const {
  const double total = total_rate();
  StepResult result;
  if (!(total > 0.0)) {
    result.absorbing = true;
    return result;
  }
  const double u_time = uniform01(rng);
  result.waiting_time = -std::log1p(-u_time) / total;

  const double u_pick = uniform01(rng);
  const std::size_t leaf = select(u_pick * total);
  result.channel = static_cast<std::uint32_t>(leaf / 2);
  result.direction = (leaf % 2 == 0) ? +1 : -1;
  return result;
}

void KmcStepper::apply(const StepResult& move) {
  const auto& ch = channels_.channel(move.channel);
  config_.apply(lattice_, ch, move.direction);
  ++stamp_counter_;
  for (std::uint32_t mode : ch.idx) {
    for (std::uint32_t c : channels_.incident(mode)) {
      if (stamp_[c] != stamp_counter_) {
        stamp_[c] = stamp_counter_;
        refresh_channel(c);
      }
    }
  }
}

StepResult KmcStepper::step(std::mt19937_64& rng) {
  const StepResult move = propose(rng);
  if (!move.absorbing) apply(move);
  return move;
}

namespace {

KmcSample snapshot(double time, const OccupationConfig& config, const ModeLattice& lattice,
                   bool record_modes) {
  KmcSample s;
  s.time = time;
  s.n_total = config.particle_count();
  s.e_total = config.energy();
  s.p_total = config.momentum();
  if (auto zero = lattice.zero_mode()) s.n_zero = config.occupation(*zero);
  if (record_modes) s.occupations = config.occupations();
  return s;
}

void digest_sample(std::uint64_t& h, const KmcSample& s) {
  h = fnv1a64(&s.time, sizeof(s.time), h);
  h = fnv1a64(&s.n_total, sizeof(s.n_total), h);
  h = fnv1a64(&s.e_total, sizeof(s.e_total), h);
  h = fnv1a64(s.p_total.data(), sizeof(std::int64_t) * 3, h);
  h = fnv1a64(&s.n_zero, sizeof(s.n_zero), h);
  if (!s.occupations.empty()) {
    h = fnv1a64(s.occupations.data(), sizeof(std::int64_t) * s.occupations.size(), h);
  }
}

}  // namespace

KmcRun simulate(const ModeLattice& lattice, const ChannelTable& channels,
                const OccupationConfig& initial, const KmcOptions& options) {
  if (options.t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  std::vector<double> times = options.sample_times;
  if (times.empty()) times.push_back(options.t_end);
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::invalid_argument("sample times must be sorted");
  }
  if (times.front() < 0.0 || times.back() > options.t_end) {
    throw std::invalid_argument("sample times must lie within [0, t_end]");
  }

  KmcRun run;
  run.seed = options.seed;
  run.stream_index = options.stream_index;
  run.gamma = options.gamma;
  run.t_end = options.t_end;

  KmcStepper stepper(lattice, channels, initial, options.gamma);
  auto rng = make_stream(options.seed, options.stream_index);

  double t = 0.0;
  std::size_t next_sample = 0;
  while (next_sample < times.size()) {
    const StepResult move = stepper.propose(rng);
    if (move.absorbing) {
      run.truncated = true;
      break;
    }
    const double t_event = t + move.waiting_time;
    while (next_sample < times.size() && times[next_sample] < t_event) {
      run.samples.push_back(
          snapshot(times[next_sample], stepper.config(), lattice, options.record_modes));
      ++next_sample;
    }
    if (next_sample >= times.size()) break;  // event lies beyond the last sample
    stepper.apply(move);
    t = t_event;
    ++run.steps;
    if (options.max_steps && run.steps >= options.max_steps) {
      run.truncated = true;
      break;
    }
  }
  // Absorbing state or step guard: the configuration is frozen from here on.
  while (next_sample < times.size()) {
    run.samples.push_back(
        snapshot(times[next_sample], stepper.config(), lattice, options.record_modes));
    ++next_sample;
  }

  run.final_occupations = stepper.config().occupations();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& s : run.samples) digest_sample(h, s);
  h = fnv1a64(run.final_occupations.data(),
              sizeof(std::int64_t) * run.final_occupations.size(), h);
  run.digest = h;
  return run;
}

}  // namespace qkin::kmc
