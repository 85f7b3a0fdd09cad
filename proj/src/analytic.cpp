#include "spiked/analytic.hpp"

#include <cmath>

namespace spiked {

double gk_energy(const GKSpectrumQuery& query) {
  if (!(std::isfinite(query.lam) && query.lam > 0.0)) {
    throw std::invalid_argument("lambda must be finite and > 0");
  }
  if (!(std::isfinite(query.mu) && query.mu >= 0.0)) {
    throw std::invalid_argument("mu must be finite and >= 0");
  }
  const auto cf = effective_lambda(query.q);
  const double radicand = query.mu + cf.lambda_eff * cf.lambda_eff;
  if (radicand < 0.0) throw std::domain_error("mu + Lambda^2 < 0");
  return 2.0 * std::sqrt(query.lam) * (2.0 * query.q.n + 1.0 + std::sqrt(radicand));
}

double gk_energy(double lam, double mu, const QuantumNumbers& q) {
  return gk_energy(GKSpectrumQuery{lam, mu, q});
}

double harmonic_energy(double lam, const QuantumNumbers& q) {
  return gk_energy(lam, 0.0, q);
}

}  // namespace spiked
