#pragma once

#include <stdexcept>
#include <string>

namespace qkin {

// State space or channel table would exceed a configured guard.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature non-convergence, integrator step underflow, solver failure.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qkin
