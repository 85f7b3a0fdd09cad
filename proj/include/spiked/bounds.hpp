#pragma once

#include <functional>

#include "spiked/core.hpp"
#include "spiked/extremize.hpp"

namespace spiked {

/// V(x) = g(x^2) + f(1/x^2). g and f must be increasing on (0, inf); the
/// convexity signs are declared, not probed.
struct TransformPair {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> f;
  std::function<double(double)> df;
  Convexity g_convexity = Convexity::Linear;
  Convexity f_convexity = Convexity::Linear;
};

/// g(u) = lam u^(beta/2), f(v) = mu v^(alpha/2), curvature from the exponents.
TransformPair power_pair(const SpikedOscParams& p);

struct BoundResult {
  double energy = 0.0;
  BoundDirection direction = BoundDirection::NoGuarantee;
  double s_hat = 0.0;  // 0 when s does not enter the functional
  double t_hat = 0.0;
  double residual = 0.0;  // |h(t_hat)| or finite-difference gradient norm
  int iterations = 0;
};

// ---------------------------------------------------------------------------
// Root equation of the spiked oscillator (beta = 2):
//   h(t) = 2 lam t^4 - mu alpha t^(2 - alpha) - 2 Lambda^2
// h has exactly one positive root for every alpha > 0.
// ---------------------------------------------------------------------------

double root_function(const SpikedOscParams& p, double lambda_eff, double t);
double root_function_derivative(const SpikedOscParams& p, double t);
double root_function_second_derivative(const SpikedOscParams& p, double t);

/// Minimum of h for alpha < 2, where h'(t*) = 0:
///   t* = (mu alpha (2 - alpha) / (8 lam))^(1 / (2 + alpha)).
double root_stationary_point(const SpikedOscParams& p);

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// h(lo) < 0 < h(hi). For alpha < 2 the left edge is t*; otherwise the bracket
/// grows geometrically from t = 1.
RootBracket root_bracket(const SpikedOscParams& p, double lambda_eff);

struct RootOptions {
  double tol_abs = 1e-12;
  double tol_rel = 1e-12;  // relative to 2 lam t^4
  double bisect_width = 1e-3;  // relative bracket width before Newton takes over
  int max_iter = 200;
};

struct RootResult {
  double t = 0.0;
  double residual = 0.0;  // |h(t)|
  int iterations = 0;
};

/// Unique positive root of h. Uses the closed form (mu alpha / 2 lam)^(1/(2+alpha))
/// when Lambda = 0, otherwise bisection followed by safeguarded Newton.
RootResult solve_root_t(const SpikedOscParams& p, double lambda_eff, const RootOptions& opts = {});

// ---------------------------------------------------------------------------
// Bound functionals
// ---------------------------------------------------------------------------

/// Spiked oscillator with beta = 2:
///   (1 - alpha/2) mu / t^alpha + 2 lam t^2 + 2 sqrt(lam)(2n + 1)  at t = root of h.
BoundResult sho_bound_energy(const SpikedOscParams& p, const QuantumNumbers& q);

/// Power-pair functional in (s, t).
double power_bound_functional(const SpikedOscParams& p, const QuantumNumbers& q, double s,
                              double t);

/// General functional for a transformation pair. Returns NaN where a
/// radicand is negative.
double general_bound_functional(const TransformPair& pair, const QuantumNumbers& q, double s,
                                double t);

/// Stationary point of the power-pair functional. Each coordinate is
/// maximized when its transformation is convex and minimized when concave;
/// a linear transformation drops its coordinate.
BoundResult power_bound_energy(const SpikedOscParams& p, const QuantumNumbers& q,
                               const ExtremizeOptions& opts = {});

/// Same search for a user-supplied pair. Throws std::domain_error if the
/// optimum has g' <= 0 or f' + Lambda^2 < 0.
BoundResult general_bound_energy(const TransformPair& pair, const QuantumNumbers& q,
                                 const ExtremizeOptions& opts = {});

/// Central-difference gradient norm of objective at (s, t); inactive axes skipped.
double gradient_norm(const std::function<double(double, double)>& objective, double s, double t,
                     bool s_active, bool t_active);

}  // namespace spiked
