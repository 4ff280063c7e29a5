#include "basis.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "constants.hpp"
#include "doctest.h"

using namespace qkin;
using namespace qkin::basis;

namespace {

// Position-space quadrature oracle for inner products of the 1-D cell
// functions.  The sinc tails decay like 1/x, so the truncated domain
// [-1000/delta, 1000/delta] leaves a few 1e-4 of the norm outside; all
// assertions against this oracle use a 1e-3 tolerance.
std::complex<double> overlap_quadrature(double k_a, double r_a, double k_b, double r_b,
                                        double delta) {
  const double extent = 1000.0 / delta;
  const double k_max = std::max(std::abs(k_a), std::abs(k_b)) + delta;
  const double step = kPi / (20.0 * k_max);
  auto n = static_cast<long long>(std::ceil(2.0 * extent / step));
  n += n % 2;
  const double h = 2.0 * extent / static_cast<double>(n);
  std::complex<double> sum = 0.0;
  for (long long i = 0; i <= n; ++i) {
    const double x = -extent + h * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::conj(wavelet_1d(k_a, r_a, x, delta)) * wavelet_1d(k_b, r_b, x, delta);
  }
  return sum * (h / 3.0);
}

}  // namespace

TEST_CASE("cell spec ties the cell length to the band width") {
  CellSpec cell(2.0);
  CHECK(cell.cell_size == kPi / 2.0);
  CHECK_THROWS_AS(CellSpec(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CellSpec(-1.0), std::invalid_argument);
}

TEST_CASE("wavelet value at its own site is the sinc limit") {
  const auto v = wavelet_1d(0.0, 0.0, 0.0, 1.0);
  CHECK(v.real() == doctest::Approx(std::sqrt(1.0 / kPi)).epsilon(1e-14));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("wavelet vanishes at the neighboring site") {
  const auto v = wavelet_1d(0.0, 0.0, kPi, 1.0);
  CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("wavelet rejects off-grid sites") {
  CHECK_THROWS_AS(wavelet_1d(0.0, 0.4, 0.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(wavelet_1d(0.0, 3.0 * kPi, 0.0, 1.0));
}

TEST_CASE("wavelet norm quadrature") {
  // Frozen from the quadrature oracle; the exact norm is 1.
  const auto norm = overlap_quadrature(0.0, 0.0, 0.0, 0.0, 1.0);
  CHECK(norm.real() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(norm.imag()) < 1e-12);
}

TEST_CASE("overlap is an exact Kronecker delta on a small grid") {
  const double delta = 1.5;
  const double site_spacing = kPi / delta;
  const double band_spacing = 2.0 * delta;
  for (int na = -3; na <= 3; ++na) {
    for (int nb = -3; nb <= 3; ++nb) {
      for (int ma = -1; ma <= 1; ++ma) {
        for (int mb = -1; mb <= 1; ++mb) {
          WaveletIndex a{delta,
                         {ma * band_spacing, 0.0, 0.0},
                         {na * site_spacing, 0.0, 0.0}};
          WaveletIndex b{delta,
                         {mb * band_spacing, 0.0, 0.0},
                         {nb * site_spacing, 0.0, 0.0}};
          const auto v = overlap(a, b);
          const double expected = (na == nb && ma == mb) ? 1.0 : 0.0;
          CHECK(v.real() == expected);
          CHECK(v.imag() == 0.0);
        }
      }
    }
  }
}

TEST_CASE("overlap rejects mismatched delta") {
  WaveletIndex a{1.0, {0, 0, 0}, {0, 0, 0}};
  WaveletIndex b{2.0, {0, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(overlap(a, b), std::invalid_argument);
}

TEST_CASE("overlap quadrature oracle agrees with the analytic Kronecker delta") {
  const double delta = 1.0;
  // Same band, shifted site: orthogonal.
  CHECK(std::abs(overlap_quadrature(0.0, 0.0, 0.0, kPi, delta)) < 1e-3);
  // Disjoint bands: orthogonal.
  CHECK(std::abs(overlap_quadrature(0.0, 0.0, 2.0 * delta, 0.0, delta)) < 1e-3);
  // Same index: unit norm.
  CHECK(overlap_quadrature(2.0 * delta, kPi, 2.0 * delta, kPi, delta).real() ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("g kernel values") {
  const double delta = 1.3;
  const double g0 = std::pow(delta / kPi, 3);
  CHECK(g_kernel({0, 0, 0}, delta) == doctest::Approx(g0).epsilon(1e-14));
  CHECK(std::abs(g_kernel({kPi / delta, 0, 0}, delta)) < 1e-16);
  // One axis at the half-cell point contributes a factor 2/pi.
  CHECK(g_kernel({kPi / (2.0 * delta), 0, 0}, delta) ==
        doctest::Approx(g0 * 2.0 / kPi).epsilon(1e-12));
}

TEST_CASE("g kernel symmetry and maximum") {
  const double delta = 0.7;
  const double g0 = g_kernel({0, 0, 0}, delta);
  for (int i = 0; i < 64; ++i) {
    const double x = -5.0 + 10.0 * i / 63.0;
    const double y = 3.0 * std::sin(7.0 * i);
    const double z = 2.0 * std::cos(3.0 * i);
    const double forward = g_kernel({x, y, z}, delta);
    const double backward = g_kernel({-x, -y, -z}, delta);
    CHECK(forward == backward);
    CHECK(std::abs(forward) <= g0 * (1.0 + 1e-14));
  }
}

TEST_CASE("cell geometry and the phase-space product") {
  SUBCASE("delta = 1") {
    const auto [dx, dp] = cell_geometry(1.0);
    CHECK(dx == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(dp == doctest::Approx(2.0 * kHbar).epsilon(1e-15));
    CHECK(dx * dp / kPlanck == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("delta = 2 halves the cell and doubles the momentum spacing") {
    const auto [dx, dp] = cell_geometry(2.0);
    CHECK(dx == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(dp == doctest::Approx(4.0 * kHbar).epsilon(1e-15));
    CHECK(dx * dp / kPlanck == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("the product is h for arbitrary delta") {
    for (double delta : {1e-3, 0.37, 5.0, 2.4e6}) {
      const auto [dx, dp] = cell_geometry(delta);
      CHECK(dx * dp / kPlanck == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("m_delta weights") {
  const double delta = 2.0;
  const double g0 = std::pow(delta / kPi, 3);
  CHECK(m_delta_weight({0, 0, 0}, delta) ==
        doctest::Approx(g0 * 8.0 / 27.0).epsilon(1e-14));
  CHECK(m_delta_weight({delta, 0, 0}, delta) ==
        doctest::Approx(g0 * (1.0 / 6.0) * (4.0 / 9.0)).epsilon(1e-14));
  CHECK(m_delta_weight({2.0 * delta, 0, 0}, delta) == 0.0);
  CHECK(m_delta_weight({0.31 * delta, 0, 0}, delta) == 0.0);
}

TEST_CASE("m_delta per-axis weights sum to one and factorize") {
  const double delta = 1.0;
  const double g0 = std::pow(delta / kPi, 3);
  double sum = 0.0;
  for (double qx : {0.0, delta, -delta}) {
    sum += m_delta_weight({qx, 0, 0}, delta);
  }
  // Summing one axis over its support recovers the other two axes' 2/3 each.
  CHECK(sum == doctest::Approx(g0 * 4.0 / 9.0).epsilon(1e-14));

  const double w3 = m_delta_weight({delta, -delta, 0}, delta);
  CHECK(w3 == doctest::Approx(g0 * (1.0 / 6.0) * (1.0 / 6.0) * (2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("m_delta quadrature oracle reproduces the 2/3 : 1/6 : 1/6 proportions") {
  const double delta = 1.0;
  const auto center = m_delta_oracle_1d(delta, 0.0);
  const auto up = m_delta_oracle_1d(delta, delta);
  const auto down = m_delta_oracle_1d(delta, -delta);

  CHECK(up.value / center.value == doctest::Approx(0.25).epsilon(0.02));
  CHECK(down.value / center.value == doctest::Approx(0.25).epsilon(0.02));
  CHECK(up.value == doctest::Approx(down.value).epsilon(1e-6));

  // Frozen from the oracle: the one-axis weights sum to (delta/pi)^3 (the
  // per-axis factor of the full three-dimensional weight).
  const double sum = center.value + up.value + down.value;
  CHECK(sum == doctest::Approx(std::pow(delta / kPi, 3)).epsilon(0.02));

  // Agreement with the closed-form weights, axis by axis.
  const double axis_scale = std::pow(delta / kPi, 3);
  CHECK(center.value == doctest::Approx(axis_scale * 2.0 / 3.0).epsilon(0.02));
  CHECK(up.value == doctest::Approx(axis_scale / 6.0).epsilon(0.02));

  CHECK_THROWS_AS(m_delta_oracle_1d(delta, 0.5 * delta), std::invalid_argument);
}
