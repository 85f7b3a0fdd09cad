#include "spiked/perturb.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spiked/analytic.hpp"

namespace spiked {

AlphaDerivative log_weighted_derivative(const RadialSolution& sol, double mu) {
  const std::size_t n = sol.u.size();
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("solution grid must have an odd point count");
  // u^2 ln(x) / x^2 dx = u^2 ln(x) / x dy on the log grid.
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = sol.u[i] * sol.u[i] * std::log(sol.x[i]) / sol.x[i];

  double total = g.front() + g.back();
  for (std::size_t i = 1; i + 1 < n; ++i) total += (i % 2 ? 4.0 : 2.0) * g[i];
  total *= sol.log_step / 3.0;

  const double x_inner = 10.0 * sol.x.front();
  double inner = 0.0;
  for (std::size_t i = 0; i + 1 < n && sol.x[i + 1] <= x_inner; ++i) {
    inner += 0.5 * (g[i] + g[i + 1]) * sol.log_step;
  }

  AlphaDerivative r;
  r.value = -mu * total;
  r.inner_fraction = total != 0.0 ? std::abs(inner / total) : 0.0;
  r.refine_grid_advised = r.inner_fraction > 1e-6;
  return r;
}

AlphaDerivative de_dalpha_at_2(double mu, const QuantumNumbers& q,
                               const std::optional<GridConfig>& grid) {
  if (!(std::isfinite(mu) && mu > 0.0)) throw std::invalid_argument("mu must be finite and > 0");
  const SpikedOscParams p{1.0, mu, 2.0, 2.0};
  const auto prob = reduce_to_radial(p, q);
  const auto sol = solve_eigenvalue(prob, grid ? *grid : default_grid(prob));
  return log_weighted_derivative(sol, mu);
}

PerturbationEstimate perturbation_estimate(double mu, double alpha, const QuantumNumbers& q,
                                           const std::optional<GridConfig>& grid) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw std::invalid_argument("alpha must be finite and > 0");
  const auto d = de_dalpha_at_2(mu, q, grid);
  PerturbationEstimate r;
  r.e_at_2 = gk_energy(1.0, mu, q);
  r.de_dalpha = d.value;
  r.alpha = alpha;
  r.estimate = r.e_at_2 + (alpha - 2.0) * r.de_dalpha;
  r.inner_fraction = d.inner_fraction;
  r.refine_grid_advised = d.refine_grid_advised;
  return r;
}

}  // namespace spiked
