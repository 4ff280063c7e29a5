#include "occupation.hpp"

#include <stdexcept>

namespace qkin {

OccupationConfig::OccupationConfig(const ModeLattice& lattice,
                                   std::vector<std::int64_t> occupations)
    : n_(std::move(occupations)) {
  if (n_.size() != lattice.size()) {
    throw std::invalid_argument("occupation vector length does not match lattice");
  }
  for (std::size_t i = 0; i < n_.size(); ++i) {
    if (n_[i] < 0) throw std::invalid_argument("occupation numbers must be nonnegative");
    total_n_ += n_[i];
    total_e_ += lattice.energy_quantum(i) * n_[i];
    const auto& z = lattice.mode(i);
    for (int c = 0; c < 3; ++c) total_p_[c] += static_cast<std::int64_t>(z[c]) * n_[i];
  }
}

void OccupationConfig::apply(const ModeLattice& lattice, const CollisionChannel& channel,
                             int direction) {
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("channel direction must be +1 or -1");
  }
  const auto [i1, i2, i3, i4] = channel.idx;
  const std::int64_t d = direction;
  if (n_[i1] + d < 0 || n_[i2] + d < 0 || n_[i3] - d < 0 || n_[i4] - d < 0) {
    throw std::invalid_argument("channel application would produce a negative occupation");
  }
  n_[i1] += d;
  n_[i2] += d;
  n_[i3] -= d;
  n_[i4] -= d;
  (void)lattice;  // conserved sums are channel invariants; caches unchanged
}

bool OccupationConfig::caches_consistent(const ModeLattice& lattice) const {
  std::int64_t n = 0, e = 0;
  std::array<std::int64_t, 3> p{0, 0, 0};
  for (std::size_t i = 0; i < n_.size(); ++i) {
    n += n_[i];
    e += lattice.energy_quantum(i) * n_[i];
    const auto& z = lattice.mode(i);
    for (int c = 0; c < 3; ++c) p[c] += static_cast<std::int64_t>(z[c]) * n_[i];
  }
  return n == total_n_ && e == total_e_ && p == total_p_;
}

}  // namespace qkin
