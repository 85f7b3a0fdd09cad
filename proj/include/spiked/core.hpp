#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spiked {

/// Raised when an iterative method fails to converge or a numerical
/// precondition (bracket, radicand, grid resolution) is violated at runtime.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radial quantum number n, angular momentum l and spatial dimension N.
struct QuantumNumbers {
  int n = 0;
  int l = 0;
  int dim = 3;
};

/// Throws std::invalid_argument unless n >= 0, l >= 0 and dim >= 2.
void validate(const QuantumNumbers& q);

/// Lambda = l + N/2 - 1 together with the 1/x^2 coefficient Lambda^2 - 1/4
/// of the reduced radial equation.
struct EffectiveCentrifugal {
  double lambda_eff = 0.0;
  double reduced_coeff = 0.0;
};

EffectiveCentrifugal effective_lambda(const QuantumNumbers& q);

/// V(x) = lam * x^beta + mu / x^alpha.
struct SpikedOscParams {
  double lam = 1.0;
  double mu = 1.0;
  double alpha = 2.0;
  double beta = 2.0;
};

void validate(const SpikedOscParams& p);

/// Sign of the second derivative of a transformation function.
enum class Convexity { Concave = -1, Linear = 0, Convex = 1 };

enum class BoundDirection { Lower, Upper, Exact, NoGuarantee };

/// Bound direction implied by the curvature of g and f. A linear member
/// takes the direction of the other one; strictly opposite signs give
/// NoGuarantee.
BoundDirection classify_direction(Convexity g, Convexity f) noexcept;

/// Curvature of u -> u^(p/2): convex for p > 2, linear at p = 2, concave below.
Convexity power_convexity(double exponent) noexcept;

/// "upper bound", "lower bound", "exact", "no guarantee".
std::string_view describe(BoundDirection d) noexcept;

/// "Upper", "Lower", "Exact", "NoGuarantee".
std::string_view short_name(BoundDirection d) noexcept;

}  // namespace spiked
