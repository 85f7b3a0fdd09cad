#include "spiked/core.hpp"

#include <cmath>
#include <string>

namespace spiked {

void validate(const QuantumNumbers& q) {
  if (q.n < 0) throw std::invalid_argument("radial quantum number n must be >= 0");
  if (q.l < 0) throw std::invalid_argument("angular momentum l must be >= 0");
  if (q.dim < 2) throw std::invalid_argument("dimension N must be an integer >= 2");
}

EffectiveCentrifugal effective_lambda(const QuantumNumbers& q) {
  validate(q);
  // l + N/2 - 1 is a half-integer, exact in binary floating point.
  const double lam = static_cast<double>(q.l) + 0.5 * static_cast<double>(q.dim) - 1.0;
  return {lam, lam * lam - 0.25};
}

void validate(const SpikedOscParams& p) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(p.lam)) throw std::invalid_argument("lambda must be finite and > 0");
  if (!positive(p.mu)) throw std::invalid_argument("mu must be finite and > 0");
  if (!positive(p.alpha)) throw std::invalid_argument("alpha must be finite and > 0");
  if (!positive(p.beta)) throw std::invalid_argument("beta must be finite and > 0");
}

BoundDirection classify_direction(Convexity g, Convexity f) noexcept {
  const int sg = static_cast<int>(g);
  const int sf = static_cast<int>(f);
  if (sg == 0 && sf == 0) return BoundDirection::Exact;
  if (sg * sf < 0) return BoundDirection::NoGuarantee;
  return (sg + sf > 0) ? BoundDirection::Lower : BoundDirection::Upper;
}

Convexity power_convexity(double exponent) noexcept {
  if (exponent > 2.0) return Convexity::Convex;
  if (exponent < 2.0) return Convexity::Concave;
  return Convexity::Linear;
}

std::string_view describe(BoundDirection d) noexcept {
  switch (d) {
    case BoundDirection::Lower: return "lower bound";
    case BoundDirection::Upper: return "upper bound";
    case BoundDirection::Exact: return "exact";
    case BoundDirection::NoGuarantee: return "no guarantee";
  }
  return "unknown";
}

std::string_view short_name(BoundDirection d) noexcept {
  switch (d) {
    case BoundDirection::Lower: return "Lower";
    case BoundDirection::Upper: return "Upper";
    case BoundDirection::Exact: return "Exact";
    case BoundDirection::NoGuarantee: return "NoGuarantee";
  }
  return "Unknown";
}

}  // namespace spiked
