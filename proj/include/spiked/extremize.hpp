#pragma once

#include <functional>

namespace spiked {

enum class Sense { Minimize, Maximize };

/// One coordinate of a two-variable search. Inactive axes are held fixed.
struct AxisSpec {
  bool active = true;
  Sense sense = Sense::Minimize;
};

struct ExtremizeOptions {
  // Log-spaced seed scan over [scan_lo, scan_hi] on each active axis.
  double scan_lo = 1e-3;
  double scan_hi = 1e3;
  int scan_points = 50;
  // Golden-section interval width, in log(x).
  double line_tol = 1e-10;
  // A sweep converges when both coordinates move less than this (relative).
  double sweep_tol = 1e-8;
  int max_sweeps = 500;
};

struct ExtremizeResult {
  double s = 1.0;
  double t = 1.0;
  double value = 0.0;
  int sweeps = 0;
};

/// Golden-section line search on x > 0 in the variable log(x). The search
/// interval is found by geometric expansion from x0. Non-finite objective
/// values are treated as the worst possible value. Throws NumericalError if
/// the objective keeps improving out to x = exp(+-60).
double line_extremize(const std::function<double(double)>& objective, double x0,
                      Sense sense, double tol_log);

/// Alternating coordinate search for a stationary point of objective(s, t)
/// over s, t > 0, extremizing each active axis in its own sense.
ExtremizeResult coordinate_extremize(const std::function<double(double, double)>& objective,
                                     AxisSpec s_axis, AxisSpec t_axis,
                                     const ExtremizeOptions& opts = {});

}  // namespace spiked
