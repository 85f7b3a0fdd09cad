#include "spiked/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spiked {
namespace {

void require_beta2(const SpikedOscParams& p) {
  if (p.beta != 2.0) throw std::invalid_argument("spiked oscillator bound requires beta = 2");
}

Sense sense_for(Convexity c) {
  // Tangents below a convex transformation give energies below the true one,
  // so the best of them is the largest.
  return c == Convexity::Convex ? Sense::Maximize : Sense::Minimize;
}

BoundResult extremize_functional(const std::function<double(double, double)>& objective,
                                 Convexity gc, Convexity fc, const ExtremizeOptions& opts) {
  const AxisSpec s_axis{gc != Convexity::Linear, sense_for(gc)};
  const AxisSpec t_axis{fc != Convexity::Linear, sense_for(fc)};
  const auto ext = coordinate_extremize(objective, s_axis, t_axis, opts);

  BoundResult r;
  r.energy = ext.value;
  r.direction = classify_direction(gc, fc);
  r.s_hat = s_axis.active ? ext.s : 0.0;
  r.t_hat = ext.t;
  r.residual = gradient_norm(objective, ext.s, ext.t, s_axis.active, t_axis.active);
  r.iterations = ext.sweeps;
  return r;
}

}  // namespace

TransformPair power_pair(const SpikedOscParams& p) {
  validate(p);
  const double lam = p.lam, mu = p.mu, a2 = 0.5 * p.alpha, b2 = 0.5 * p.beta;
  TransformPair pair;
  pair.g = [=](double u) { return lam * std::pow(u, b2); };
  pair.dg = [=](double u) { return lam * b2 * std::pow(u, b2 - 1.0); };
  pair.f = [=](double v) { return mu * std::pow(v, a2); };
  pair.df = [=](double v) { return mu * a2 * std::pow(v, a2 - 1.0); };
  pair.g_convexity = power_convexity(p.beta);
  pair.f_convexity = power_convexity(p.alpha);
  return pair;
}

double root_function(const SpikedOscParams& p, double lambda_eff, double t) {
  const double t2 = t * t;
  return 2.0 * p.lam * t2 * t2 - p.mu * p.alpha * std::pow(t, 2.0 - p.alpha) -
         2.0 * lambda_eff * lambda_eff;
}

double root_function_derivative(const SpikedOscParams& p, double t) {
  return 8.0 * p.lam * t * t * t - p.mu * p.alpha * (2.0 - p.alpha) * std::pow(t, 1.0 - p.alpha);
}

double root_function_second_derivative(const SpikedOscParams& p, double t) {
  return 24.0 * p.lam * t * t -
         p.mu * p.alpha * (2.0 - p.alpha) * (1.0 - p.alpha) * std::pow(t, -p.alpha);
}

double root_stationary_point(const SpikedOscParams& p) {
  validate(p);
  if (!(p.alpha < 2.0)) throw std::invalid_argument("h has an interior minimum only for alpha < 2");
  return std::pow(p.mu * p.alpha * (2.0 - p.alpha) / (8.0 * p.lam), 1.0 / (2.0 + p.alpha));
}

RootBracket root_bracket(const SpikedOscParams& p, double lambda_eff) {
  validate(p);
  auto h = [&](double t) { return root_function(p, lambda_eff, t); };
  RootBracket b;
  if (p.alpha < 2.0) {
    // h decreases from -2 Lambda^2 at 0 to its minimum at t*, then increases.
    b.lo = root_stationary_point(p);
    b.hi = 2.0 * b.lo;
    while (!(h(b.hi) > 0.0)) {
      b.lo = b.hi;
      b.hi *= 2.0;
    }
    return b;
  }
  // h is increasing on (0, inf) and tends to -inf (or -2(mu + Lambda^2)) at 0.
  b.lo = b.hi = 1.0;
  if (h(1.0) < 0.0) {
    do {
      b.lo = b.hi;
      b.hi *= 2.0;
    } while (!(h(b.hi) > 0.0));
  } else {
    do {
      b.hi = b.lo;
      b.lo *= 0.5;
    } while (!(h(b.lo) < 0.0));
  }
  return b;
}

RootResult solve_root_t(const SpikedOscParams& p, double lambda_eff, const RootOptions& opts) {
  validate(p);
  if (!(lambda_eff >= 0.0)) throw std::invalid_argument("Lambda must be >= 0");
  auto h = [&](double t) { return root_function(p, lambda_eff, t); };
  auto tolerance = [&](double t) { return opts.tol_abs + opts.tol_rel * 2.0 * p.lam * std::pow(t, 4); };

  if (lambda_eff == 0.0) {
    const double t = std::pow(p.mu * p.alpha / (2.0 * p.lam), 1.0 / (2.0 + p.alpha));
    return {t, std::abs(h(t)), 0};
  }

  auto [lo, hi] = root_bracket(p, lambda_eff);
  int it = 0;
  for (; it < opts.max_iter && (hi - lo) > opts.bisect_width * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }

  double t = 0.5 * (lo + hi);
  double best_t = t;
  double best_r = std::abs(h(t));
  for (; it < opts.max_iter; ++it) {
    const double ht = h(t);
    const double r = std::abs(ht);
    if (r < best_r) {
      best_r = r;
      best_t = t;
    }
    if (r <= tolerance(t)) return {t, r, it};
    (ht < 0.0 ? lo : hi) = t;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      // Bracket exhausted at machine precision; the residual is rounding.
      return {best_t, best_r, it};
    }
    const double dh = root_function_derivative(p, t);
    double next = t - ht / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  throw NumericalError("solve_root_t: no convergence after " + std::to_string(opts.max_iter) +
                       " iterations; bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "]");
}

BoundResult sho_bound_energy(const SpikedOscParams& p, const QuantumNumbers& q) {
  validate(p);
  require_beta2(p);
  const auto cf = effective_lambda(q);
  const auto root = solve_root_t(p, cf.lambda_eff);
  const double t = root.t;

  BoundResult r;
  r.energy = (1.0 - 0.5 * p.alpha) * p.mu / std::pow(t, p.alpha) + 2.0 * p.lam * t * t +
             2.0 * std::sqrt(p.lam) * (2.0 * q.n + 1.0);
  r.direction = classify_direction(Convexity::Linear, power_convexity(p.alpha));
  r.s_hat = 0.0;
  r.t_hat = t;
  r.residual = root.residual;
  r.iterations = root.iterations;
  return r;
}

double power_bound_functional(const SpikedOscParams& p, const QuantumNumbers& q, double s,
                              double t) {
  const double lam_eff = effective_lambda(q).lambda_eff;
  const double inner = 0.5 * p.mu * p.alpha * std::pow(t, 2.0 - p.alpha) + lam_eff * lam_eff;
  return p.lam * (1.0 - 0.5 * p.beta) * std::pow(s, p.beta) +
         (1.0 - 0.5 * p.alpha) * p.mu / std::pow(t, p.alpha) +
         std::sqrt(2.0 * p.lam * p.beta * std::pow(s, p.beta - 2.0)) *
             (2.0 * q.n + 1.0 + std::sqrt(inner));
}

double general_bound_functional(const TransformPair& pair, const QuantumNumbers& q, double s,
                                double t) {
  const double lam_eff = effective_lambda(q).lambda_eff;
  const double u = s * s;
  const double v = 1.0 / (t * t);
  const double gp = pair.dg(u);
  const double fp = pair.df(v);
  return pair.g(u) - u * gp + pair.f(v) - v * fp +
         2.0 * std::sqrt(gp) * (2.0 * q.n + 1.0 + std::sqrt(fp + lam_eff * lam_eff));
}

BoundResult power_bound_energy(const SpikedOscParams& p, const QuantumNumbers& q,
                               const ExtremizeOptions& opts) {
  validate(p);
  validate(q);
  auto obj = [&](double s, double t) { return power_bound_functional(p, q, s, t); };
  return extremize_functional(obj, power_convexity(p.beta), power_convexity(p.alpha), opts);
}

BoundResult general_bound_energy(const TransformPair& pair, const QuantumNumbers& q,
                                 const ExtremizeOptions& opts) {
  validate(q);
  if (!pair.g || !pair.dg || !pair.f || !pair.df) {
    throw std::invalid_argument("transformation pair needs g, g', f and f'");
  }
  const double lam_eff = effective_lambda(q).lambda_eff;
  auto check_radicands = [&](double s, double t) {
    if (!(pair.dg(s * s) > 0.0)) {
      throw std::domain_error("g' is not positive at s = " + std::to_string(s) +
                              "; g is not increasing");
    }
    if (pair.df(1.0 / (t * t)) + lam_eff * lam_eff < 0.0) {
      throw std::domain_error("f' + Lambda^2 < 0 at t = " + std::to_string(t) +
                              "; f is not increasing");
    }
  };
  check_radicands(1.0, 1.0);

  auto obj = [&](double s, double t) { return general_bound_functional(pair, q, s, t); };
  auto r = extremize_functional(obj, pair.g_convexity, pair.f_convexity, opts);
  check_radicands(r.s_hat > 0.0 ? r.s_hat : 1.0, r.t_hat);
  return r;
}

double gradient_norm(const std::function<double(double, double)>& objective, double s, double t,
                     bool s_active, bool t_active) {
  double sum = 0.0;
  if (s_active) {
    const double d = 1e-5 * s;
    const double ds = (objective(s + d, t) - objective(s - d, t)) / (2.0 * d);
    sum += ds * ds;
  }
  if (t_active) {
    const double d = 1e-5 * t;
    const double dt = (objective(s, t + d) - objective(s, t - d)) / (2.0 * d);
    sum += dt * dt;
  }
  return std::sqrt(sum);
}

}  // namespace spiked
