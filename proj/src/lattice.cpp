#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "constants.hpp"
#include "errors.hpp"

namespace qkin {

namespace {

std::uint64_t mode_key(const Vec3i& z) {
  constexpr std::uint64_t offset = 1u << 20;
  return ((static_cast<std::uint64_t>(z[0]) + offset) << 42) |
         ((static_cast<std::uint64_t>(z[1]) + offset) << 21) |
         (static_cast<std::uint64_t>(z[2]) + offset);
}

}  // namespace

ModeLattice::ModeLattice(double box_length, std::vector<Vec3i> modes)
    : box_length_(box_length), modes_(std::move(modes)) {
  if (!(box_length_ > 0.0)) throw std::invalid_argument("box length must be positive");
  if (modes_.empty()) throw std::invalid_argument("mode list must be nonempty");
  for (const auto& z : modes_) {
    for (int c : z) {
      if (std::abs(c) >= (1 << 20)) throw std::invalid_argument("mode index out of range");
    }
  }
  std::sort(modes_.begin(), modes_.end());
  if (std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end()) {
    throw std::invalid_argument("duplicate mode index");
  }
  energy_.reserve(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& z = modes_[i];
    energy_.push_back(static_cast<std::int64_t>(z[0]) * z[0] +
                      static_cast<std::int64_t>(z[1]) * z[1] +
                      static_cast<std::int64_t>(z[2]) * z[2]);
    index_.emplace(mode_key(z), i);
  }
  if (auto it = index_.find(mode_key({0, 0, 0})); it != index_.end()) {
    zero_mode_ = it->second;
  }
}

ModeLattice ModeLattice::cube(double box_length, int z_max) {
  if (z_max < 0) throw std::invalid_argument("z_max must be nonnegative");
  std::vector<Vec3i> modes;
  modes.reserve(static_cast<std::size_t>(2 * z_max + 1) * (2 * z_max + 1) * (2 * z_max + 1));
  for (int x = -z_max; x <= z_max; ++x)
    for (int y = -z_max; y <= z_max; ++y)
      for (int z = -z_max; z <= z_max; ++z) modes.push_back({x, y, z});
  return ModeLattice(box_length, std::move(modes));
}

std::optional<std::size_t> ModeLattice::find(const Vec3i& z) const {
  auto it = index_.find(mode_key(z));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double ModeLattice::energy_scale(double mass) const {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  const double k1 = 2.0 * kPi / box_length_;
  return kHbar * kHbar * k1 * k1 / (2.0 * mass);
}

double ModeLattice::mode_energy(std::size_t i, double mass) const {
  return energy_scale(mass) * static_cast<double>(energy_[i]);
}

std::array<double, 3> ModeLattice::wavevector(std::size_t i) const {
  const double k1 = 2.0 * kPi / box_length_;
  const auto& z = modes_[i];
  return {k1 * z[0], k1 * z[1], k1 * z[2]};
}

ChannelTable ChannelTable::enumerate(const ModeLattice& lattice, std::size_t max_channels) {
  const std::size_t m = lattice.size();

  // Group unordered pairs i<j by their conserved (sum z, sum |z|^2).  A pair
  // with a repeated mode (i==j) can only close a channel against itself:
  // z1=z2 forces z3=z4=z1, a no-op.  So i<j pairs cover every channel and all
  // four indices of a channel are distinct.
  struct PairKey {
    Vec3i zsum;
    std::int64_t esum;
    bool operator<(const PairKey& o) const {
      if (zsum != o.zsum) return zsum < o.zsum;
      return esum < o.esum;
    }
  };
  std::map<PairKey, std::vector<std::pair<std::uint32_t, std::uint32_t>>> groups;
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto& zi = lattice.mode(i);
    for (std::uint32_t j = i + 1; j < m; ++j) {
      const auto& zj = lattice.mode(j);
      PairKey key{{zi[0] + zj[0], zi[1] + zj[1], zi[2] + zj[2]},
                  lattice.energy_quantum(i) + lattice.energy_quantum(j)};
      groups[key].emplace_back(i, j);
    }
  }

  std::size_t total = 0;
  for (const auto& [key, pairs] : groups) {
    total += pairs.size() * (pairs.size() - 1) / 2;
    if (total > max_channels) {
      throw CapacityError("channel table would exceed guard of " +
                          std::to_string(max_channels) + " channels");
    }
  }

  ChannelTable table;
  table.channels_.reserve(total);
  for (const auto& [key, pairs] : groups) {
    for (std::size_t a = 0; a < pairs.size(); ++a) {
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        table.channels_.push_back(
            {{pairs[a].first, pairs[a].second, pairs[b].first, pairs[b].second}});
      }
    }
  }
  std::sort(table.channels_.begin(), table.channels_.end(),
            [](const CollisionChannel& x, const CollisionChannel& y) { return x.idx < y.idx; });

  table.by_mode_.assign(m, {});
  for (std::uint32_t c = 0; c < table.channels_.size(); ++c) {
    for (std::uint32_t mode : table.channels_[c].idx) {
      table.by_mode_[mode].push_back(c);
    }
  }
  return table;
}

}  // namespace qkin
