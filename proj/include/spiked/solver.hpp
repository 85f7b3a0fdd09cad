#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spiked/bounds.hpp"
#include "spiked/core.hpp"

namespace spiked {

/// Reduced radial problem -u'' + W u = E u with
///   W(x) = V(x) + (Lambda^2 - 1/4) / x^2,   u = x^((N-1)/2) psi.
struct RadialProblem {
  std::function<double(double)> potential;
  QuantumNumbers q;
  EffectiveCentrifugal centrifugal;
  // Bound-formula estimate of the eigenvalue, used to seed the search window.
  double seed_energy = 0.0;
  // Set when the potential is the built-in power pair.
  std::optional<SpikedOscParams> params;

  double effective_potential(double x) const {
    return potential(x) + centrifugal.reduced_coeff / (x * x);
  }
};

RadialProblem reduce_to_radial(const SpikedOscParams& p, const QuantumNumbers& q);
RadialProblem reduce_to_radial(const TransformPair& pair, const QuantumNumbers& q);

/// Integration grid on [x_min, x_max] with a uniform step in log(x).
/// `points` must be odd (composite Simpson) and at least 1000.
struct GridConfig {
  double x_min = 1e-5;
  double x_max = 10.0;
  int points = 20001;
};

void validate(const GridConfig& g);

/// x_max = max(10, 3 sqrt(E), 3 x_turn(E)) at E = seed + 2, where x_turn is
/// the outermost classical turning point.
GridConfig default_grid(const RadialProblem& prob);

struct SolverOptions {
  double energy_tol = 1e-13;       // relative, on the final energy
  double accuracy = 1e-5;          // target absolute accuracy at the default grid
  double window_halfwidth = 2.0;   // initial search window around the seed
  int max_widen = 30;
  int max_iter = 300;
  bool verify_grid = true;         // re-solve at half step and compare
};

struct RadialSolution {
  double energy = 0.0;
  int nodes = 0;
  QuantumNumbers q;
  std::optional<SpikedOscParams> params;
  std::vector<double> x;
  std::vector<double> u;        // normalized: integral of u^2 dx = 1
  double log_step = 0.0;        // grid step in log(x)
  double match_defect = 0.0;    // |u'/u| jump at the matching point
  std::size_t match_index = 0;
  int iterations = 0;
  double grid_delta = 0.0;      // E(half step) - E, 0 when not checked
};

/// Number of sign changes of the outward solution on the whole grid at
/// energy E, i.e. the number of eigenvalues below E.
int count_nodes(const RadialProblem& prob, const GridConfig& grid, double energy);

/// Two-sided Numerov shooting. Bisection on the node count isolates the
/// state with n nodes, then regula falsi on the log-derivative mismatch at
/// the outermost turning point refines it.
RadialSolution solve_eigenvalue(const RadialProblem& prob, const GridConfig& grid,
                                const SolverOptions& opts = {});
RadialSolution solve_eigenvalue(const RadialProblem& prob);

/// Composite Simpson integral of u^2 dx over the solution grid.
double norm_squared(const RadialSolution& sol);

/// Interior sign changes of u.
int count_sign_changes(const std::vector<double>& values);

enum class WaveFormat { Csv, JsonLines };

/// CSV: header `x,u` then one row per grid point, 17 significant digits.
/// JSON lines: a metadata object (energy, n, l, N, alpha, mu, lambda) then
/// one {"x", "u"} object per grid point.
void export_wavefunction(const RadialSolution& sol, WaveFormat format, std::ostream& out);

}  // namespace spiked
