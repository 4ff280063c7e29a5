#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lattice.hpp"
#include "meanfield.hpp"

namespace qkin::condensate {

using meanfield::BathSpec;

// Contact coupling u = 4 pi hbar^2 a / m.
double contact_coupling(double scattering_length, double mass);

// Thermalized non-condensate bath feeding the K = 0 band.
struct BathModel {
  const ModeLattice* lattice = nullptr;
  double mass = 0;
  BathSpec bath{0, 0};
  double scattering_length = 0;
  double delta = 0;  // cell half-width for g(0) = (delta/pi)^3
  double eta = -1;   // energy window for discrete triads; < 0 selects eps0/2
};

struct BathKernelSample {
  double g_plus = 0;
  double g_minus = 0;
  std::size_t triad_count = 0;
  bool empty = false;  // no triads inside the energy window
};

// Discrete triad sums (pi u^2/hbar^2) sum_{123} g(x)^3 e^{i(K1+K2-K3).x}
// nbar1 nbar2 (nbar3+1) over K != 0 modes with K3 = K1 + K2 on-lattice and
// |omega1 + omega2 - omega3| <= eta, plus the (n+1)-swapped partner.
BathKernelSample bath_kernels(const BathModel& model, const std::array<double, 3>& x);

// Net condensate-amplitude rate from the continuum bath integral with the
// energy delta reduced analytically (K1 . K2 = 0, Jacobian m/(hbar K1 K2)):
// (e^(mu/kT) - 1) (4 u^2 m^3 / (hbar^5 pi^3)) int n1 n2 (1+n12) dw1 dw2.
// Nonpositive for mu < 0 and exactly zero at mu = 0.
double gain_minus_loss_rate(const BathSpec& bath, double scattering_length, double mass);

// g(0) / (1 - e^(mu/kT)); requires mu < 0.
double stationary_rho(const BathSpec& bath, double delta);

struct RhoSeries {
  std::vector<double> times;
  std::vector<double> rho;
  bool unbounded = false;  // ceiling reached (mu = 0 indefinite growth)
  double relaxation_rate = 0;  // decay rate of the affine vector field
};

// d rho/dt = A [ (e^(mu/kT) - 1) rho / g(0) + 1 ] with the spatial kernel
// moment A = 2 int G+(s) g(s) d^3 s precomputed from the triad sums.
RhoSeries integrate_rho(const BathModel& model, double rho0, double t_end,
                        std::size_t sample_count = 101, double ceiling_factor = 1e6);

struct PhiOptions {
  bool include_gain_loss = true;
  std::size_t sample_count = 101;
  double dt = 0;  // 0 = resolve the coherent rotation with ~200 steps/period
};

struct PhiSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> phi;
  std::vector<double> rho;
  double coherent_rate = 0;   // rotation frequency (rad/s)
  double gain_loss_rate = 0;  // modulus growth rate (1/s)
};

// d phi/dt = -(i/hbar)(u g(0) sum nbar) phi - (i/hbar) 2 u rho phi
//            + (gain - loss) phi, with rho co-evolved by the rho equation
// under the Gaussian closure <psi+ psi psi> -> 2 phi rho.
PhiSeries integrate_phi(const BathModel& model, std::complex<double> phi0, double rho0,
                        double t_end, const PhiOptions& options = {});

enum class ConvexityVerdict { kGain, kLoss, kNeutral, kMixed };

struct ConvexityReport {
  ConvexityVerdict verdict = ConvexityVerdict::kNeutral;
  std::size_t pairs = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  double min_margin = 0;
  double max_margin = 0;
  std::vector<double> margins;  // row-major over pairs (i <= j, i + j on grid)
};

// Checks F(w_i) + F(w_j) > F(w_i + w_j) over all grid pairs whose sum stays
// on the grid; margins within +-zero_tolerance count as zero.
ConvexityReport convexity_gain_check(std::span<const double> omega, std::span<const double> f,
                                     double zero_tolerance = 0.0);

// Forward-minus-backward bath rate for a tabulated nbar(omega) on a uniform
// grid k*domega, k = 1..n, under the same delta reduction as
// gain_minus_loss_rate; positive means net gain.
double net_gain_nonequilibrium(std::span<const double> omega, std::span<const double> nbar,
                               double mass, double scattering_length);

}  // namespace qkin::condensate
