#pragma once

#include <cstdint>
#include <vector>

#include "lattice.hpp"

namespace qkin {

// Occupation numbers over a lattice with cached conserved totals:
// N = sum n, E = sum |z|^2 n (units eps0), P = sum z n (units 2 pi / L).
class OccupationConfig {
 public:
  OccupationConfig(const ModeLattice& lattice, std::vector<std::int64_t> occupations);

  const std::vector<std::int64_t>& occupations() const { return n_; }
  std::int64_t occupation(std::size_t i) const { return n_[i]; }
  std::size_t size() const { return n_.size(); }

  std::int64_t particle_count() const { return total_n_; }
  std::int64_t energy() const { return total_e_; }
  const std::array<std::int64_t, 3>& momentum() const { return total_p_; }

  // Applies the channel's e-vector: direction +1 raises modes 1,2 and lowers
  // modes 3,4; -1 is the reverse.  The caches are delta-updated and stay exact
  // because the channel conserves all three integer sums.
  void apply(const ModeLattice& lattice, const CollisionChannel& channel, int direction);

  // Recomputes the cached totals from scratch and compares.
  bool caches_consistent(const ModeLattice& lattice) const;

 private:
  std::vector<std::int64_t> n_;
  std::int64_t total_n_ = 0;
  std::int64_t total_e_ = 0;
  std::array<std::int64_t, 3> total_p_{0, 0, 0};
};

}  // namespace qkin
