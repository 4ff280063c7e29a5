#pragma once

#include <array>
#include <complex>
#include <utility>

namespace qkin::basis {

using Vec3 = std::array<double, 3>;

// One phase-space cell family: momentum half-width delta, cell length pi/delta.
struct CellSpec {
  double delta;      // band half-width (1/m)
  double cell_size;  // l_c = pi / delta (m)

  explicit CellSpec(double delta_);
};

// Band-limited basis index: band center per axis (even multiple of delta) and
// cell site per axis (integer multiple of pi/delta).
struct WaveletIndex {
  double delta;
  Vec3 band;
  Vec3 site;
};

// sin(t)/t with a series expansion below |t| = 1e-4.
double sinc(double t);

// One-dimensional cell function e^{iK(x-r)} sin(delta (x-r)) / (sqrt(pi delta) (x-r)).
// r must lie on the site grid n*pi/delta.
std::complex<double> wavelet_1d(double band, double site, double x, double delta);

// Inner product of two basis functions, evaluated in the momentum domain where
// the band indicator algebra makes it an exact Kronecker delta.
std::complex<double> overlap(const WaveletIndex& a, const WaveletIndex& b);

// Within-band commutator kernel g(x) = (1/pi^3) prod_i sin(delta x_i)/x_i.
double g_kernel(const Vec3& x, double delta);

// (dx, dp) = (pi/delta, 2 delta hbar); the product is Planck's constant.
std::pair<double, double> cell_geometry(double delta);

// Momentum smearing weight: (delta/pi)^3 prod_i w(Q_i), w(0)=2/3, w(+-delta)=1/6,
// zero off the {0,+-delta} lattice.
double m_delta_weight(const Vec3& q, double delta);

struct MDeltaOracle {
  double value;     // quadrature value of the one-axis smearing integral
  double residual;  // grid-refinement residual estimate
};

// Direct double quadrature of the one-axis analogue of the smearing integral,
// int dy dy' g(y) g(y') g(y'-y)^3 e^{iQ(y-y')}.  The argument q is the band
// offset label in {0, +-delta}; adjacent bands are spaced 2*delta apart, so the
// phase is evaluated at twice the label.
MDeltaOracle m_delta_oracle_1d(double delta, double q);

}  // namespace qkin::basis
