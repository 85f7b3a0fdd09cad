#include "spiked/extremize.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spiked/core.hpp"

namespace spiked {
namespace {

constexpr double kInvPhi = 0.6180339887498948482;
constexpr double kGrow = 1.6180339887498948482;
constexpr double kLogLimit = 60.0;

// Everything below is phrased as minimization of `score`.
double score(double value, Sense sense) {
  if (!std::isfinite(value)) return std::numeric_limits<double>::infinity();
  return sense == Sense::Minimize ? value : -value;
}

bool better(double a, double b, Sense sense) {
  return score(a, sense) < score(b, sense);
}

}  // namespace

double line_extremize(const std::function<double(double)>& objective, double x0,
                      Sense sense, double tol_log) {
  auto phi = [&](double u) { return score(objective(std::exp(u)), sense); };

  const double u0 = std::log(x0);
  const double f0 = phi(u0);
  double step = 0.1;
  double fp = phi(u0 + step);
  double fm = phi(u0 - step);

  double a, c;
  if (fp >= f0 && fm >= f0) {
    if (fp == f0 && fm == f0) return x0;  // flat
    a = u0 - step;
    c = u0 + step;
  } else {
    // Walk downhill with growing steps until the objective turns up.
    const double dir = (fp < fm) ? 1.0 : -1.0;
    double ua = u0;
    double ub = u0 + dir * step;
    double fb = std::min(fp, fm);
    for (;;) {
      step *= kGrow;
      const double uc = ub + dir * step;
      if (std::abs(uc) > kLogLimit) {
        throw NumericalError("line search: objective unbounded along coordinate (x -> " +
                             std::string(dir > 0 ? "infinity" : "0") + ")");
      }
      const double fc = phi(uc);
      if (fc > fb) {
        a = std::min(ua, uc);
        c = std::max(ua, uc);
        break;
      }
      ua = ub;
      ub = uc;
      fb = fc;
    }
  }

  double x1 = c - kInvPhi * (c - a);
  double x2 = a + kInvPhi * (c - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (c - a > tol_log) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kInvPhi * (c - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (c - a);
      f2 = phi(x2);
    }
  }
  const double u_best = (f1 < f2) ? x1 : x2;
  // Never return a point worse than the start.
  return (std::min(f1, f2) <= f0) ? std::exp(u_best) : x0;
}

ExtremizeResult coordinate_extremize(const std::function<double(double, double)>& objective,
                                     AxisSpec s_axis, AxisSpec t_axis,
                                     const ExtremizeOptions& opts) {
  ExtremizeResult r;

  // Seed scan: inner extremum over t for each s, then outer extremum over s.
  {
    const int np = std::max(opts.scan_points, 2);
    std::vector<double> grid(np);
    const double la = std::log(opts.scan_lo);
    const double lb = std::log(opts.scan_hi);
    for (int i = 0; i < np; ++i) grid[i] = std::exp(la + (lb - la) * i / (np - 1));
    const std::vector<double> fixed{1.0};
    const auto& s_grid = s_axis.active ? grid : fixed;
    const auto& t_grid = t_axis.active ? grid : fixed;

    bool have_outer = false;
    for (double s : s_grid) {
      bool have_inner = false;
      double t_in = 1.0;
      double v_in = 0.0;
      for (double t : t_grid) {
        const double v = objective(s, t);
        if (!std::isfinite(v)) continue;
        if (!have_inner || better(v, v_in, t_axis.sense)) {
          have_inner = true;
          t_in = t;
          v_in = v;
        }
      }
      if (!have_inner) continue;
      if (!have_outer || better(v_in, r.value, s_axis.sense)) {
        have_outer = true;
        r.s = s;
        r.t = t_in;
        r.value = v_in;
      }
    }
    if (!have_outer) throw NumericalError("extremize: objective is not finite anywhere on the seed grid");
  }

  if (!s_axis.active && !t_axis.active) return r;

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double s_old = r.s;
    const double t_old = r.t;
    const double v_old = r.value;
    if (s_axis.active) {
      r.s = line_extremize([&](double s) { return objective(s, r.t); }, r.s, s_axis.sense,
                           opts.line_tol);
    }
    if (t_axis.active) {
      r.t = line_extremize([&](double t) { return objective(r.s, t); }, r.t, t_axis.sense,
                           opts.line_tol);
    }
    r.value = objective(r.s, r.t);
    r.sweeps = sweep;

    const double move = std::max(std::abs(std::log(r.s / s_old)), std::abs(std::log(r.t / t_old)));
    const double dv = std::abs(r.value - v_old);
    const double vscale = std::max(1.0, std::abs(r.value));
    // Golden section resolves an extremum only to about sqrt(machine eps) in
    // x, so a stalled value with sub-1e-6 moves also counts as converged.
    if (move < opts.sweep_tol || (dv <= 1e-15 * vscale && move < 1e-6)) return r;
  }
  throw NumericalError("extremize: no convergence after " + std::to_string(opts.max_sweeps) +
                       " sweeps (s=" + std::to_string(r.s) + ", t=" + std::to_string(r.t) + ")");
}

}  // namespace spiked
