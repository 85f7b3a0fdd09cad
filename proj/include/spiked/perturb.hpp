#pragma once

#include <optional>

#include "spiked/core.hpp"
#include "spiked/solver.hpp"

namespace spiked {

/// First-order expansion of E(alpha) for -Delta + x^2 + mu x^(-alpha) about
/// the solvable point alpha = 2 (lambda fixed at 1).
struct PerturbationEstimate {
  double e_at_2 = 0.0;
  double de_dalpha = 0.0;
  double alpha = 2.0;
  double estimate = 0.0;  // e_at_2 + (alpha - 2) de_dalpha
  // Share of the derivative integral coming from x < 10 x_min.
  double inner_fraction = 0.0;
  bool refine_grid_advised = false;
};

struct AlphaDerivative {
  double value = 0.0;
  double inner_fraction = 0.0;
  bool refine_grid_advised = false;  // inner_fraction > 1e-6
};

/// -mu * integral u^2 ln(x) / x^2 dx for a normalized solution u.
AlphaDerivative log_weighted_derivative(const RadialSolution& sol, double mu);

/// dE/dalpha at alpha = 2 from the numerical alpha = 2 eigenfunction.
AlphaDerivative de_dalpha_at_2(double mu, const QuantumNumbers& q,
                               const std::optional<GridConfig>& grid = std::nullopt);

PerturbationEstimate perturbation_estimate(double mu, double alpha, const QuantumNumbers& q,
                                           const std::optional<GridConfig>& grid = std::nullopt);

}  // namespace spiked
