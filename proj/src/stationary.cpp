#include "stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "constants.hpp"
#include "errors.hpp"
#include "kmc.hpp"

namespace qkin::kmc {

namespace {

struct StateHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    return fnv1a64(v.data(), v.size() * sizeof(std::int64_t), 0xCBF29CE484222325ULL);
  }
};

// Depth-first enumeration of all occupation vectors with the given invariants.
class ShellEnumerator {
 public:
  ShellEnumerator(const ModeLattice& lattice, std::int64_t n, std::int64_t e,
                  std::array<std::int64_t, 3> p, std::size_t max_states)
      : lattice_(lattice), max_states_(max_states), target_p_(p) {
    const std::size_t m = lattice.size();
    // Suffix bounds for pruning: energy and per-axis momentum reachable by the
    // remaining modes.
    min_e_.assign(m + 1, 0);
    max_e_.assign(m + 1, 0);
    for (int c = 0; c < 3; ++c) {
      min_z_[c].assign(m + 1, 0);
      max_z_[c].assign(m + 1, 0);
    }
    std::int64_t lo_e = std::numeric_limits<std::int64_t>::max(), hi_e = 0;
    std::array<std::int64_t, 3> lo_z{}, hi_z{};
    lo_z.fill(std::numeric_limits<std::int64_t>::max());
    hi_z.fill(std::numeric_limits<std::int64_t>::min());
    for (std::size_t i = m; i-- > 0;) {
      lo_e = std::min<std::int64_t>(lo_e, lattice.energy_quantum(i));
      hi_e = std::max<std::int64_t>(hi_e, lattice.energy_quantum(i));
      min_e_[i] = lo_e;
      max_e_[i] = hi_e;
      const auto& z = lattice.mode(i);
      for (int c = 0; c < 3; ++c) {
        lo_z[c] = std::min<std::int64_t>(lo_z[c], z[c]);
        hi_z[c] = std::max<std::int64_t>(hi_z[c], z[c]);
        min_z_[c][i] = lo_z[c];
        max_z_[c][i] = hi_z[c];
      }
    }
    current_.assign(m, 0);
    descend(0, n, e, p);
  }

  std::vector<std::vector<std::int64_t>> take() { return std::move(states_); }

 private:
  void descend(std::size_t depth, std::int64_t n_rem, std::int64_t e_rem,
               std::array<std::int64_t, 3> p_rem) {
    if (n_rem == 0) {
      if (e_rem == 0 && p_rem == std::array<std::int64_t, 3>{0, 0, 0}) {
        if (states_.size() >= max_states_) {
          throw CapacityError("shell exceeds the " + std::to_string(max_states_) +
                              "-state enumeration guard");
        }
        states_.push_back(current_);
      }
      return;
    }
    if (depth == lattice_.size()) return;
    if (e_rem < n_rem * min_e_[depth] || e_rem > n_rem * max_e_[depth]) return;
    for (int c = 0; c < 3; ++c) {
      if (p_rem[c] < n_rem * min_z_[c][depth] || p_rem[c] > n_rem * max_z_[c][depth]) return;
    }
    const std::int64_t e_mode = lattice_.energy_quantum(depth);
    const auto& z = lattice_.mode(depth);
    std::int64_t k_max = n_rem;
    if (e_mode > 0) k_max = std::min(k_max, e_rem / e_mode);
    for (std::int64_t k = 0; k <= k_max; ++k) {
      current_[depth] = k;
      std::array<std::int64_t, 3> p_next = p_rem;
      for (int c = 0; c < 3; ++c) p_next[c] -= k * z[c];
      descend(depth + 1, n_rem - k, e_rem - k * e_mode, p_next);
    }
    current_[depth] = 0;
  }

  const ModeLattice& lattice_;
  std::size_t max_states_;
  std::array<std::int64_t, 3> target_p_;
  std::vector<std::int64_t> min_e_, max_e_;
  std::array<std::vector<std::int64_t>, 3> min_z_, max_z_;
  std::vector<std::int64_t> current_;
  std::vector<std::vector<std::int64_t>> states_;
};

struct Edge {
  std::uint32_t from, to;  // transition from -> to with rate `rate`
  double rate;             // and the reverse rate `back`
  double back;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void merge(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// Null vector of the component generator by dense Gaussian elimination on
// [generator with one row replaced by the normalization sum].
std::vector<double> dense_null_vector(const std::vector<std::uint32_t>& members,
                                      const std::vector<std::vector<std::pair<std::uint32_t, double>>>& out_edges,
                                      const std::vector<std::uint32_t>& local_index) {
  const std::size_t c = members.size();
  std::vector<double> a(c * c, 0.0);
  for (std::size_t li = 0; li < c; ++li) {
    const std::uint32_t gi = members[li];
    for (const auto& [gj, rate] : out_edges[gi]) {
      const std::size_t lj = local_index[gj];
      a[lj * c + li] += rate;  // inflow to j from i
      a[li * c + li] -= rate;  // outflow from i
    }
  }
  for (std::size_t j = 0; j < c; ++j) a[0 * c + j] = 1.0;  // normalization row
  std::vector<double> b(c, 0.0);
  b[0] = 1.0;

  for (std::size_t col = 0; col < c; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < c; ++r) {
      if (std::abs(a[r * c + col]) > std::abs(a[pivot * c + col])) pivot = r;
    }
    if (std::abs(a[pivot * c + col]) < 1e-300) {
      throw NumericalError("singular generator matrix in stationary solve");
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < c; ++k) std::swap(a[pivot * c + k], a[col * c + k]);
      std::swap(b[pivot], b[col]);
    }
    const double inv = 1.0 / a[col * c + col];
    for (std::size_t r = 0; r < c; ++r) {
      if (r == col) continue;
      const double f = a[r * c + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t k = col; k < c; ++k) a[r * c + k] -= f * a[col * c + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> w(c);
  for (std::size_t r = 0; r < c; ++r) w[r] = b[r] / a[r * c + r];
  return w;
}

// Detailed-balance propagation over a BFS tree; exact for reversible chains.
std::vector<double> balance_null_vector(const std::vector<std::uint32_t>& members,
                                        const std::vector<std::vector<std::pair<std::uint32_t, double>>>& out_edges,
                                        const std::vector<std::vector<std::pair<std::uint32_t, double>>>& in_edges,
                                        const std::vector<std::uint32_t>& local_index) {
  const std::size_t c = members.size();
  std::vector<double> w(c, 0.0);
  std::vector<std::uint32_t> queue;
  queue.reserve(c);
  w[0] = 1.0;
  queue.push_back(members[0]);
  std::size_t head = 0;
  while (head < queue.size()) {
    const std::uint32_t gi = queue[head++];
    const double wi = w[local_index[gi]];
    for (const auto& [gj, rate] : out_edges[gi]) {
      auto& wj = w[local_index[gj]];
      if (wj != 0.0) continue;
      double back = 0.0;
      for (const auto& [gk, r] : out_edges[gj]) {
        if (gk == gi) {
          back = r;
          break;
        }
      }
      if (back <= 0.0) throw NumericalError("irreversible edge in collision graph");
      wj = wi * rate / back;
      queue.push_back(gj);
    }
  }
  (void)in_edges;
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

ShellDistribution stationary_exact(const ModeLattice& lattice, const ChannelTable& channels,
                                   std::int64_t n_particles, std::int64_t energy,
                                   const std::array<std::int64_t, 3>& momentum, double gamma,
                                   std::size_t max_states, std::size_t dense_limit) {
  if (n_particles < 0 || energy < 0) {
    throw std::invalid_argument("shell invariants must be nonnegative");
  }
  ShellDistribution dist;
  {
    ShellEnumerator enumerator(lattice, n_particles, energy, momentum, max_states);
    dist.states = enumerator.take();
  }
  const std::size_t s = dist.states.size();
  if (s == 0) return dist;

  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, StateHash> index;
  index.reserve(s * 2);
  for (std::uint32_t i = 0; i < s; ++i) index.emplace(dist.states[i], i);

  // Jump generator: for each state and channel, the two directed rates.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out_edges(s), in_edges(s);
  UnionFind components(s);
  for (std::uint32_t i = 0; i < s; ++i) {
    OccupationConfig config(lattice, dist.states[i]);
    for (const auto& ch : channels.channels()) {
      for (int dir : {+1, -1}) {
        const double rate =
            (dir == +1) ? rate_plus(config, ch, gamma) : rate_minus(config, ch, gamma);
        if (rate <= 0.0) continue;
        auto target = dist.states[i];
        target[ch.idx[0]] += dir;
        target[ch.idx[1]] += dir;
        target[ch.idx[2]] -= dir;
        target[ch.idx[3]] -= dir;
        const auto it = index.find(target);
        if (it == index.end()) {
          throw NumericalError("collision target escaped the enumerated shell");
        }
        out_edges[i].emplace_back(it->second, rate);
        in_edges[it->second].emplace_back(i, rate);
        components.merge(i, it->second);
        ++dist.edge_count;
      }
    }
  }

  // Component labels in first-seen order.
  dist.component.assign(s, 0);
  std::unordered_map<std::size_t, std::uint32_t> root_label;
  std::vector<std::vector<std::uint32_t>> members;
  for (std::uint32_t i = 0; i < s; ++i) {
    const std::size_t root = components.find(i);
    auto [it, inserted] = root_label.emplace(root, static_cast<std::uint32_t>(members.size()));
    if (inserted) members.emplace_back();
    dist.component[i] = it->second;
    members[it->second].push_back(i);
  }
  dist.component_count = members.size();

  dist.probability.assign(s, 0.0);
  std::vector<std::uint32_t> local_index(s, 0);
  for (const auto& comp : members) {
    for (std::uint32_t li = 0; li < comp.size(); ++li) local_index[comp[li]] = li;
    std::vector<double> w;
    if (comp.size() == 1) {
      w = {1.0};
    } else if (comp.size() <= dense_limit) {
      w = dense_null_vector(comp, out_edges, local_index);
    } else {
      w = balance_null_vector(comp, out_edges, in_edges, local_index);
    }
    const double uniform = 1.0 / static_cast<double>(comp.size());
    for (std::uint32_t li = 0; li < comp.size(); ++li) {
      dist.probability[comp[li]] = w[li];
      dist.max_uniformity_deviation =
          std::max(dist.max_uniformity_deviation, std::abs(w[li] - uniform) / uniform);
    }
  }

  // Detailed-balance residual over every edge, relative to the local rate scale.
  for (std::uint32_t i = 0; i < s; ++i) {
    for (const auto& [j, rate] : out_edges[i]) {
      double back = 0.0;
      for (const auto& [k, r] : out_edges[j]) {
        if (k == i) {
          back = r;
          break;
        }
      }
      const double flux = dist.probability[i] * rate - dist.probability[j] * back;
      const double scale = std::max(dist.probability[i] * rate, dist.probability[j] * back);
      if (scale > 0.0) {
        dist.max_balance_residual = std::max(dist.max_balance_residual, std::abs(flux) / scale);
      }
    }
  }
  return dist;
}

double grand_canonical_weight(const ModeLattice& lattice, double mass,
                              const OccupationConfig& config, double temperature,
                              double mu, const std::array<double, 3>& drift) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  const double kt = kBoltzmann * temperature;
  const double eps0 = lattice.energy_scale(mass);
  const double k1 = 2.0 * kPi / lattice.box_length();
  const auto& p = config.momentum();
  const double drift_dot_p =
      kHbar * k1 *
      (drift[0] * static_cast<double>(p[0]) + drift[1] * static_cast<double>(p[1]) +
       drift[2] * static_cast<double>(p[2]));
  const double exponent = -(eps0 * static_cast<double>(config.energy()) -
                            mu * static_cast<double>(config.particle_count()) - drift_dot_p) /
                          kt;
  return std::exp(exponent);
}

bool grand_canonical_normalizable(const ModeLattice& lattice, double mass,
                                  double temperature, double mu,
                                  const std::array<double, 3>& drift) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  const double eps0 = lattice.energy_scale(mass);
  const double k1 = 2.0 * kPi / lattice.box_length();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& z = lattice.mode(i);
    const double drift_term =
        kHbar * k1 * (drift[0] * z[0] + drift[1] * z[1] + drift[2] * z[2]);
    if (eps0 * static_cast<double>(lattice.energy_quantum(i)) - mu - drift_term <= 0.0) {
      return false;
    }
  }
  return true;
}

std::vector<double> mean_occupation_rhs_exact(
    const ModeLattice& lattice, const ChannelTable& channels,
    std::span<const std::vector<std::int64_t>> states, std::span<const double> probability,
    double gamma) {
  if (states.size() != probability.size()) {
    throw std::invalid_argument("states and probabilities must have equal length");
  }
  double total = 0.0;
  for (double p : probability) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("distribution must be normalized");
  }
  std::vector<double> rhs(lattice.size(), 0.0);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double w = probability[k];
    if (w == 0.0) continue;
    OccupationConfig config(lattice, states[k]);
    for (const auto& ch : channels.channels()) {
      const double flux = w * (rate_plus(config, ch, gamma) - rate_minus(config, ch, gamma));
      if (flux == 0.0) continue;
      rhs[ch.idx[0]] += flux;
      rhs[ch.idx[1]] += flux;
      rhs[ch.idx[2]] -= flux;
      rhs[ch.idx[3]] -= flux;
    }
  }
  return rhs;
}

}  // namespace qkin::kmc
