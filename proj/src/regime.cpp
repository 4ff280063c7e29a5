#include "regime.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace qkin::regime {

void GasParameters::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(scattering_length > 0.0)) {
    throw std::invalid_argument("scattering length must be positive");
  }
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
}

double GasParameters::contact_coupling() const {
  validate();
  return 4.0 * kPi * kHbar * kHbar * scattering_length / mass;
}

double thermal_wavelength(double mass, double temperature) {
  if (!(mass > 0.0) || !(temperature > 0.0)) {
    throw std::invalid_argument("mass and temperature must be positive");
  }
  return kPlanck / std::sqrt(2.0 * mass * kBoltzmann * temperature);
}

double mean_free_path(double density, double scattering_length) {
  if (!(density > 0.0) || !(scattering_length > 0.0)) {
    throw std::invalid_argument("density and scattering length must be positive");
  }
  const double sigma = 8.0 * kPi * scattering_length * scattering_length;
  return 1.0 / (std::sqrt(2.0) * density * sigma);
}

RegimeReport regime_report(const GasParameters& params, double threshold) {
  params.validate();
  if (!(threshold >= 1.0)) throw std::invalid_argument("threshold must be at least 1");

  RegimeReport report;
  report.lambda_thermal = thermal_wavelength(params.mass, params.temperature);
  report.lambda_mfp = mean_free_path(params.density, params.scattering_length);
  report.xi = std::sqrt(kPi / (8.0 * params.scattering_length * params.density));
  const double lc3 = params.cell_size * params.cell_size * params.cell_size;
  report.k_diagonal =
      params.scattering_length * report.lambda_mfp * report.lambda_thermal / lc3;
  report.critical_scale =
      std::cbrt(params.scattering_length * report.lambda_mfp * report.lambda_thermal);
  report.weak_boundary_density =
      kPi / (8.0 * params.scattering_length * params.cell_size * params.cell_size);

  auto large = [&](const char* name, double ratio) {
    return ConditionMargin{name, ratio, true, threshold, ratio >= threshold};
  };
  report.cell_vs_thermal = large("l_c / lambda_T", params.cell_size / report.lambda_thermal);
  report.mfp_vs_thermal =
      large("lambda_mfp / lambda_T", report.lambda_mfp / report.lambda_thermal);
  report.mfp_vs_cell = large("lambda_mfp / l_c", report.lambda_mfp / params.cell_size);
  report.k_diagonal_condition = ConditionMargin{
      "a lambda_mfp lambda_T / l_c^3", report.k_diagonal, false, threshold,
      report.k_diagonal <= 1.0 / threshold};
  report.weak_condensation = ConditionMargin{"l_c / xi", params.cell_size / report.xi,
                                             false, 1.0, params.cell_size <= report.xi};
  report.inequality_note =
      "weak condensation classified on l_c <= xi (density bound reading); the displayed "
      "cell-size inequality l_c >> xi runs the other way and would instead require "
      "l_c / xi >= " +
      std::to_string(threshold);

  report.all_pass = report.cell_vs_thermal.pass && report.mfp_vs_thermal.pass &&
                    report.mfp_vs_cell.pass && report.k_diagonal_condition.pass &&
                    report.weak_condensation.pass;
  return report;
}

}  // namespace qkin::regime
