#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace qkin {

using Vec3i = std::array<int, 3>;

// Discrete momentum grid: integer index vectors z, K = (2 pi / L) z, and the
// integer energy quantum |z|^2 in units eps0 = hbar^2 (2 pi / L)^2 / 2m.
class ModeLattice {
 public:
  ModeLattice(double box_length, std::vector<Vec3i> modes);

  // All modes with |z|_inf <= z_max.
  static ModeLattice cube(double box_length, int z_max);

  double box_length() const { return box_length_; }
  std::size_t size() const { return modes_.size(); }
  const Vec3i& mode(std::size_t i) const { return modes_[i]; }
  const std::vector<Vec3i>& modes() const { return modes_; }
  std::int64_t energy_quantum(std::size_t i) const { return energy_[i]; }

  std::optional<std::size_t> find(const Vec3i& z) const;
  std::optional<std::size_t> zero_mode() const { return zero_mode_; }

  // eps0 = hbar^2 (2 pi / L)^2 / (2 m), the energy unit of one |z|^2 quantum.
  double energy_scale(double mass) const;
  // hbar * omega_i = eps0 * |z_i|^2.
  double mode_energy(std::size_t i, double mass) const;
  // K_i = (2 pi / L) z_i.
  std::array<double, 3> wavevector(std::size_t i) const;

 private:
  double box_length_;
  std::vector<Vec3i> modes_;           // sorted lexicographically, unique
  std::vector<std::int64_t> energy_;   // |z|^2 per mode
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::optional<std::size_t> zero_mode_;
};

// Conservation-satisfying mode quadruple {i1,i2} <-> {i3,i4}; the "+" direction
// raises modes 1,2 and lowers modes 3,4.  Canonical form i1<i2, i3<i4 and
// (i1,i2) lexicographically before (i3,i4).
struct CollisionChannel {
  std::array<std::uint32_t, 4> idx;
};

class ChannelTable {
 public:
  // Enumerates every unordered pair of unordered pairs with equal integer
  // momentum and energy sums, deduplicated under the in-pair and pair-swap
  // symmetries, no-ops excluded.  Throws CapacityError past max_channels.
  static ChannelTable enumerate(const ModeLattice& lattice,
                                std::size_t max_channels = 10'000'000);

  std::size_t size() const { return channels_.size(); }
  const CollisionChannel& channel(std::size_t c) const { return channels_[c]; }
  const std::vector<CollisionChannel>& channels() const { return channels_; }
  // Channels whose quadruple contains mode i.
  const std::vector<std::uint32_t>& incident(std::size_t mode) const {
    return by_mode_[mode];
  }

 private:
  std::vector<CollisionChannel> channels_;
  std::vector<std::vector<std::uint32_t>> by_mode_;
};

}  // namespace qkin
