#pragma once

#include "spiked/core.hpp"

namespace spiked {

/// Closed-form spectrum of -Delta + lam x^2 + mu / x^2 in N dimensions.
struct GKSpectrumQuery {
  double lam = 1.0;
  double mu = 0.0;
  QuantumNumbers q;
};

/// 2 sqrt(lam) (2n + 1 + sqrt(mu + Lambda^2)). mu = 0 is admitted.
double gk_energy(const GKSpectrumQuery& query);
double gk_energy(double lam, double mu, const QuantumNumbers& q);

/// Pure oscillator, sqrt(lam)(4n + 2l + N); same as gk_energy with mu = 0.
double harmonic_energy(double lam, const QuantumNumbers& q);

}  // namespace spiked
