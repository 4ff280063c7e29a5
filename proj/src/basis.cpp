#include "basis.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"
#include "errors.hpp"

namespace qkin::basis {

namespace {

// Snap x to the nearest integer multiple of `spacing`; throws if off-grid.
long long grid_index(double x, double spacing, const char* what) {
  const double ratio = x / spacing;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument(std::string(what) + " not on the cell grid");
  }
  return static_cast<long long>(n);
}

void require_positive_delta(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
}

}  // namespace

CellSpec::CellSpec(double delta_) : delta(delta_), cell_size(kPi / delta_) {
  require_positive_delta(delta_);
}

double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0);
  }
  return std::sin(t) / t;
}

std::complex<double> wavelet_1d(double band, double site, double x, double delta) {
  require_positive_delta(delta);
  grid_index(site, kPi / delta, "cell site");
  const double y = x - site;
  const double amplitude = std::sqrt(delta / kPi) * sinc(delta * y);
  const double phase = band * y;
  return std::polar(amplitude, phase);
}

std::complex<double> overlap(const WaveletIndex& a, const WaveletIndex& b) {
  require_positive_delta(a.delta);
  if (a.delta != b.delta) {
    throw std::invalid_argument("overlap requires indices with the same delta");
  }
  const double site_spacing = kPi / a.delta;
  const double band_spacing = 2.0 * a.delta;
  for (int i = 0; i < 3; ++i) {
    // Bands tile momentum with spacing 2*delta; distinct bands have disjoint
    // support and distinct sites integrate sin(n pi) = 0, so the inner product
    // reduces to an exact Kronecker delta on the integer labels.
    if (grid_index(a.band[i], band_spacing, "band center") !=
        grid_index(b.band[i], band_spacing, "band center")) {
      return {0.0, 0.0};
    }
    if (grid_index(a.site[i], site_spacing, "cell site") !=
        grid_index(b.site[i], site_spacing, "cell site")) {
      return {0.0, 0.0};
    }
  }
  return {1.0, 0.0};
}

double g_kernel(const Vec3& x, double delta) {
  require_positive_delta(delta);
  double value = 1.0;
  for (int i = 0; i < 3; ++i) {
    value *= (delta / kPi) * sinc(delta * x[i]);
  }
  return value;
}

std::pair<double, double> cell_geometry(double delta) {
  require_positive_delta(delta);
  return {kPi / delta, 2.0 * delta * kHbar};
}

double m_delta_weight(const Vec3& q, double delta) {
  require_positive_delta(delta);
  const double tol = 1e-9 * delta;
  double weight = 1.0;
  for (int i = 0; i < 3; ++i) {
    const double qi = q[i];
    if (std::abs(qi) <= tol) {
      weight *= 2.0 / 3.0;
    } else if (std::abs(std::abs(qi) - delta) <= tol) {
      weight *= 1.0 / 6.0;
    } else {
      return 0.0;
    }
  }
  const double scale = delta / kPi;
  return scale * scale * scale * weight;
}

namespace {

// Dimensionless form of the one-axis smearing integral at phase wavenumber
// kappa (in units of delta):
//   J(kappa) = int dY dS sinc(Y) sinc(Y+S) sinc(S)^3 cos(kappa S)
// so that the physical integral is (delta^3/pi^5) J.  Simpson in both
// directions; g(y)g(y+s) tails fall off like 1/Y^2, sinc(S)^3 like 1/S^3.
double m_delta_quadrature(double kappa, double step) {
  const double y_limit = 300.0;
  const double s_limit = 60.0;
  const auto n_panels = [step](double limit) {
    auto n = static_cast<long long>(std::ceil(2.0 * limit / step));
    return n + (n % 2);  // Simpson needs an even panel count
  };
  const long long ny = n_panels(y_limit);
  const long long ns = n_panels(s_limit);
  const double hy = 2.0 * y_limit / static_cast<double>(ny);
  const double hs = 2.0 * s_limit / static_cast<double>(ns);

  double outer = 0.0;
  for (long long is = 0; is <= ns; ++is) {
    const double s = -s_limit + hs * static_cast<double>(is);
    const double ws = (is == 0 || is == ns) ? 1.0 : (is % 2 ? 4.0 : 2.0);
    const double sc = sinc(s);
    const double kernel = sc * sc * sc * std::cos(kappa * s);
    if (kernel == 0.0) continue;
    double inner = 0.0;
    for (long long iy = 0; iy <= ny; ++iy) {
      const double y = -y_limit + hy * static_cast<double>(iy);
      const double wy = (iy == 0 || iy == ny) ? 1.0 : (iy % 2 ? 4.0 : 2.0);
      inner += wy * sinc(y) * sinc(y + s);
    }
    outer += ws * kernel * inner * (hy / 3.0);
  }
  return outer * (hs / 3.0);
}

}  // namespace

MDeltaOracle m_delta_oracle_1d(double delta, double q) {
  require_positive_delta(delta);
  const double label = q / delta;
  if (std::abs(label) > 1e-9 && std::abs(std::abs(label) - 1.0) > 1e-9) {
    throw std::invalid_argument("m_delta_oracle_1d expects q in {0, +delta, -delta}");
  }
  // Adjacent bands are 2*delta apart, so the label +-delta maps to phase 2q.
  const double kappa = 2.0 * std::round(label);

  const double coarse = m_delta_quadrature(kappa, 0.10);
  const double fine = m_delta_quadrature(kappa, 0.05);
  const double scale = delta * delta * delta / (kPi * kPi * kPi * kPi * kPi);
  const double value = fine * scale;
  const double residual = std::abs(fine - coarse) * scale;

  const double reference = (2.0 / 3.0) * std::pow(delta / kPi, 3);
  if (residual > 0.05 * reference) {
    throw NumericalError("m_delta_oracle_1d quadrature did not converge; residual " +
                         std::to_string(residual));
  }
  return {value, residual};
}

}  // namespace qkin::basis
