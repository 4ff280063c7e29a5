#pragma once

#include <string>

namespace qkin::regime {

// Physical constants of one species plus the chosen cell size.
struct GasParameters {
  double mass;               // kg
  double scattering_length;  // m
  double temperature;        // K
  double density;            // 1/m^3
  double cell_size;          // l_c (m)

  void validate() const;
  // u = 4 pi hbar^2 a / m, always recomputed.
  double contact_coupling() const;
};

// lambda_T = h / sqrt(2 m k T).
double thermal_wavelength(double mass, double temperature);

// 1/(sqrt(2) rho sigma) with sigma = 8 pi a^2.  The sqrt(2) thermal-average
// factor and the bosonic s-wave cross-section are conventional choices; the
// source text uses the mean free path numerically without defining it.
double mean_free_path(double density, double scattering_length);

struct ConditionMargin {
  std::string name;
  double ratio = 0;
  bool want_large = false;  // pass when ratio >= threshold (else ratio <= 1/threshold)
  double threshold = 10;
  bool pass = false;
};

struct RegimeReport {
  double lambda_thermal = 0;            // m
  double lambda_mfp = 0;                // m
  double xi = 0;                        // weak-condensation length sqrt(pi/8 a rho) (m)
  double k_diagonal = 0;                // a lambda_mfp lambda_T / l_c^3
  double critical_scale = 0;            // (a lambda_mfp lambda_T)^(1/3) (m)
  double weak_boundary_density = 0;     // pi / (8 a l_c^2) (1/m^3)
  ConditionMargin cell_vs_thermal;      // l_c / lambda_T >> 1
  ConditionMargin mfp_vs_thermal;       // lambda_mfp / lambda_T >> 1
  ConditionMargin mfp_vs_cell;          // lambda_mfp / l_c >> 1
  ConditionMargin k_diagonal_condition; // a lambda_mfp lambda_T / l_c^3 << 1
  ConditionMargin weak_condensation;    // l_c / xi <= 1 (see note)
  std::string inequality_note;
  bool all_pass = false;
};

// Evaluates the validity-regime inequality chain; ">>" and "<<" use the given
// threshold factor.  The weak-condensation test is classified on l_c <= xi,
// the reading consistent with the density bound the source text derives; the
// displayed inequality runs the other way and is flagged in inequality_note.
RegimeReport regime_report(const GasParameters& params, double threshold = 10.0);

}  // namespace qkin::regime
