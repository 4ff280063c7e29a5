#pragma once

namespace qkin {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// SI exact value (2019 redefinition); hbar derived so that 2*pi*hbar == h
// holds to rounding, which the cell phase-space identity dx*dp = h relies on.
inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kHbar = kPlanck / (2.0 * kPi);     // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kAtomicMassUnit = 1.66053906892e-27;  // kg

}  // namespace qkin
