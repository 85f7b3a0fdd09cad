#include "spiked/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace spiked {
namespace {

constexpr double kRescaleAbove = 1e150;
constexpr double kRescaleBy = 1e-150;
// Integration starts where h^2 |Q| / 12 drops below this.
constexpr double kStartThreshold = 0.02;
// Decay exponent of the classically forbidden tail kept on the default grid.
constexpr double kTailAction = 40.0;

// Numerov in y = ln x with u = sqrt(x) phi:
//   phi'' = (x^2 (V - E) + Lambda^2) phi,
// which has no singular coefficient at the origin.
class Workspace {
 public:
  Workspace(const RadialProblem& prob, const GridConfig& grid)
      : n_((validate(grid), static_cast<std::size_t>(grid.points))) {
    const double y0 = std::log(grid.x_min);
    const double y1 = std::log(grid.x_max);
    h_ = (y1 - y0) / static_cast<double>(n_ - 1);
    x_.resize(n_);
    x2_.resize(n_);
    q0_.resize(n_);
    const double lam2 = prob.centrifugal.lambda_eff * prob.centrifugal.lambda_eff;
    for (std::size_t i = 0; i < n_; ++i) {
      const double x = (i + 1 == n_) ? grid.x_max : std::exp(y0 + h_ * static_cast<double>(i));
      x_[i] = x;
      x2_[i] = x * x;
      const double v = prob.potential(x);
      if (!std::isfinite(v)) {
        throw std::invalid_argument("potential is not finite at x = " + std::to_string(x));
      }
      q0_[i] = x2_[i] * v + lam2;
    }

    const double c = h_ * h_ / 12.0;
    start_ = 0;
    while (start_ + 8 < n_ && c * std::abs(q0_[start_]) > kStartThreshold) ++start_;
    if (start_ + 8 >= n_) throw NumericalError("grid too coarse: no resolvable start point");

    // Deep inside a repulsive spike the solution is suppressed faster than any
    // power, so start from u = 0; otherwise follow the regular power law x^Lambda.
    const double xs = x_[start_];
    const double vx2 = q0_[start_] - lam2;
    const bool spike_dominates =
        vx2 > std::max(std::abs(prob.centrifugal.reduced_coeff), 1.0) && vx2 > 0.0 && xs > 0.0;
    if (spike_dominates) {
      start0_ = 0.0;
      start1_ = 1e-20;
    } else {
      start0_ = 1.0;
      start1_ = std::exp(h_ * prob.centrifugal.lambda_eff);
    }

    w_min_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = start_; i < n_; ++i) {
      w_min_ = std::min(w_min_, (q0_[i] - 0.25) / x2_[i]);
    }
  }

  std::size_t size() const { return n_; }
  std::size_t start() const { return start_; }
  double step() const { return h_; }
  double x(std::size_t i) const { return x_[i]; }
  double w_min() const { return w_min_; }

  double f(std::size_t i, double e) const { return 1.0 - h_ * h_ / 12.0 * (q0_[i] - e * x2_[i]); }

  // Classically allowed iff W < E iff Q < 0.
  bool allowed(std::size_t i, double e) const { return q0_[i] - e * x2_[i] < 0.0; }

  int count_nodes(double e) const {
    double p0 = start0_;
    double p1 = start1_;
    double fm = f(start_, e);
    double fc = f(start_ + 1, e);
    int last_sign = sign(p1) != 0 ? sign(p1) : sign(p0);
    int nodes = 0;
    // Past the outer turning point the step stops resolving the decay once
    // h^2 Q / 12 grows large, and Numerov then produces spurious sign flips.
    const std::size_t stop = resolvable_end(e);
    for (std::size_t i = start_ + 1; i + 1 < stop; ++i) {
      const double fp = f(i + 1, e);
      const double p2 = ((12.0 - 10.0 * fc) * p1 - fm * p0) / fp;
      const int s = sign(p2);
      if (s != 0) {
        if (last_sign != 0 && s != last_sign) ++nodes;
        last_sign = s;
      }
      p0 = p1;
      p1 = p2;
      if (std::abs(p1) > kRescaleAbove) {
        p0 *= kRescaleBy;
        p1 *= kRescaleBy;
      }
      fm = fc;
      fc = fp;
    }
    return nodes;
  }

  // Outward solution on [start, last]; entries below start are zero.
  void outward(double e, std::size_t last, std::vector<double>& phi) const {
    phi.assign(n_, 0.0);
    phi[start_] = start0_;
    phi[start_ + 1] = start1_;
    for (std::size_t i = start_ + 1; i < last; ++i) {
      phi[i + 1] = ((12.0 - 10.0 * f(i, e)) * phi[i] - f(i - 1, e) * phi[i - 1]) / f(i + 1, e);
      if (std::abs(phi[i + 1]) > kRescaleAbove) {
        for (std::size_t k = start_; k <= i + 1; ++k) phi[k] *= kRescaleBy;
      }
    }
  }

  // Inward solution on [first, n-1] with phi(x_max) = 0.
  void inward(double e, std::size_t first, std::vector<double>& phi) const {
    phi.assign(n_, 0.0);
    phi[n_ - 1] = 0.0;
    phi[n_ - 2] = 1e-20;
    for (std::size_t i = n_ - 2; i > first; --i) {
      phi[i - 1] = ((12.0 - 10.0 * f(i, e)) * phi[i] - f(i + 1, e) * phi[i + 1]) / f(i - 1, e);
      if (std::abs(phi[i - 1]) > kRescaleAbove) {
        for (std::size_t k = i - 1; k < n_; ++k) phi[k] *= kRescaleBy;
      }
    }
  }

  std::size_t resolvable_end(double e) const {
    const double c = h_ * h_ / 12.0;
    std::size_t i = std::min(matching_index(e) + 2, n_);
    while (i < n_ && c * (q0_[i] - e * x2_[i]) <= kStartThreshold) ++i;
    return i;
  }

  std::size_t matching_index(double e) const {
    std::size_t m = n_ - 1;
    while (m > start_ && !allowed(m, e)) --m;
    return std::clamp(m, start_ + 2, n_ - 3);
  }

 private:
  static int sign(double v) { return (v > 0.0) - (v < 0.0); }

  std::size_t n_;
  double h_ = 0.0;
  std::vector<double> x_;
  std::vector<double> x2_;
  std::vector<double> q0_;
  std::size_t start_ = 0;
  double start0_ = 0.0;
  double start1_ = 0.0;
  double w_min_ = 0.0;
};

struct Matched {
  std::vector<double> out;
  std::vector<double> in;
};

// Log-derivative mismatch u_out'/u_out - u_in'/u_in at index m, with the inward
// branch scaled to agree with the outward one at m.
double mismatch(const Workspace& ws, double e, std::size_t m, Matched& buf) {
  ws.outward(e, m + 1, buf.out);
  ws.inward(e, m - 1, buf.in);
  const double pm = buf.out[m];
  if (pm == 0.0 || buf.in[m] == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double scale = pm / buf.in[m];
  return (buf.out[m + 1] - scale * buf.in[m + 1]) / (ws.step() * ws.x(m) * pm);
}

double simpson(const std::vector<double>& g, double h) {
  const std::size_t n = g.size();
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("Simpson rule needs an odd number of points >= 3");
  double s = g.front() + g.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g[i];
  return s * h / 3.0;
}

// Bracket [lo, hi] with count(lo) <= n < count(hi), then bisect until the
// width is at most `width`.
void isolate(const Workspace& ws, int n, double seed, const SolverOptions& opts, double width,
             double& lo, double& hi, int& iterations) {
  const double floor_e = ws.w_min();
  double w = opts.window_halfwidth;
  lo = std::max(seed - w, floor_e);
  hi = std::max(seed + w, lo + w);
  int widen = 0;
  for (;;) {
    const bool lo_ok = ws.count_nodes(lo) <= n;
    const bool hi_ok = ws.count_nodes(hi) > n;
    if (lo_ok && hi_ok) break;
    if (++widen > opts.max_widen) {
      throw NumericalError("no state with " + std::to_string(n) + " nodes in window [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    w *= 2.0;
    if (!lo_ok) lo = std::max(lo - w, floor_e);
    if (!hi_ok) hi += w;
  }
  while (hi - lo > width && iterations < opts.max_iter) {
    const double mid = 0.5 * (lo + hi);
    (ws.count_nodes(mid) > n ? hi : lo) = mid;
    ++iterations;
  }
}

}  // namespace

void validate(const GridConfig& g) {
  if (!(std::isfinite(g.x_min) && g.x_min > 0.0)) throw std::invalid_argument("grid x_min must be > 0");
  if (!(std::isfinite(g.x_max) && g.x_max > g.x_min)) {
    throw std::invalid_argument("grid x_max must exceed x_min");
  }
  if (g.points < 1000) throw std::invalid_argument("grid needs at least 1000 points");
  if (g.points % 2 == 0) throw std::invalid_argument("grid point count must be odd");
}

RadialProblem reduce_to_radial(const SpikedOscParams& p, const QuantumNumbers& q) {
  validate(p);
  RadialProblem prob;
  const double lam = p.lam, mu = p.mu, alpha = p.alpha, beta = p.beta;
  if (beta == 2.0) {
    prob.potential = [=](double x) { return lam * x * x + mu * std::pow(x, -alpha); };
    prob.seed_energy = sho_bound_energy(p, q).energy;
  } else {
    prob.potential = [=](double x) { return lam * std::pow(x, beta) + mu * std::pow(x, -alpha); };
    prob.seed_energy = power_bound_energy(p, q).energy;
  }
  prob.q = q;
  prob.centrifugal = effective_lambda(q);
  prob.params = p;
  return prob;
}

RadialProblem reduce_to_radial(const TransformPair& pair, const QuantumNumbers& q) {
  RadialProblem prob;
  auto g = pair.g;
  auto f = pair.f;
  prob.potential = [g, f](double x) { return g(x * x) + f(1.0 / (x * x)); };
  prob.q = q;
  prob.centrifugal = effective_lambda(q);
  try {
    prob.seed_energy = general_bound_energy(pair, q).energy;
  } catch (const std::exception&) {
    // No usable estimate; start from the bottom of the well.
    double wmin = std::numeric_limits<double>::infinity();
    for (double y = -7.0; y <= 4.0; y += 0.01) {
      const double x = std::pow(10.0, y);
      wmin = std::min(wmin, prob.effective_potential(x));
    }
    prob.seed_energy = wmin + 2.0;
  }
  return prob;
}

GridConfig default_grid(const RadialProblem& prob) {
  GridConfig g;
  const double e_top = prob.seed_energy + 2.0;
  double x_turn = 0.0;
  for (double y = -3.0; y <= 4.0; y += 0.005) {
    const double x = std::pow(10.0, y);
    if (prob.effective_potential(x) < e_top) x_turn = x;
  }
  // Where the WKB tail beyond the turning point has decayed by e^-40.
  double x_decayed = x_turn;
  double action = 0.0;
  const double dx = 1e-3 * std::max(x_turn, 1.0);
  while (action < kTailAction && x_decayed < 1e4) {
    const double mid = x_decayed + 0.5 * dx;
    action += std::sqrt(std::max(prob.effective_potential(mid) - e_top, 0.0)) * dx;
    x_decayed += dx;
  }
  const double x_wide = std::max(3.0 * std::sqrt(std::max(e_top, 0.0)), 3.0 * x_turn);
  g.x_max = std::max(10.0, std::min(x_wide, x_decayed));
  return g;
}

int count_nodes(const RadialProblem& prob, const GridConfig& grid, double energy) {
  return Workspace(prob, grid).count_nodes(energy);
}

int count_sign_changes(const std::vector<double>& values) {
  int changes = 0;
  int last = 0;
  for (double v : values) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

RadialSolution solve_eigenvalue(const RadialProblem& prob, const GridConfig& grid,
                                const SolverOptions& opts) {
  validate(prob.q);
  if (!prob.potential) throw std::invalid_argument("radial problem has no potential");
  const Workspace ws(prob, grid);
  const int n = prob.q.n;

  RadialSolution sol;
  sol.q = prob.q;
  sol.params = prob.params;
  sol.log_step = ws.step();

  double lo = 0.0, hi = 0.0;
  int iterations = 0;
  isolate(ws, n, prob.seed_energy, opts, 1e-4 * std::max(1.0, std::abs(prob.seed_energy)), lo, hi,
          iterations);

  // Regula falsi (Illinois) on the mismatch; the node-count bracket is kept
  // as a fallback whenever the mismatch misbehaves.
  const std::size_t m = ws.matching_index(0.5 * (lo + hi));
  Matched buf;
  double d_lo = mismatch(ws, lo, m, buf);
  double d_hi = mismatch(ws, hi, m, buf);
  double e = 0.5 * (lo + hi);
  const double tol = opts.energy_tol * std::max(1.0, std::abs(e));
  bool secant_ok = std::isfinite(d_lo) && std::isfinite(d_hi) && d_lo * d_hi < 0.0;
  int side = 0;
  bool converged = false;
  while (!converged && iterations < opts.max_iter) {
    ++iterations;
    if (!secant_ok) {
      e = 0.5 * (lo + hi);
      (ws.count_nodes(e) > n ? hi : lo) = e;
      converged = hi - lo <= tol;
      continue;
    }
    double e_new = (lo * d_hi - hi * d_lo) / (d_hi - d_lo);
    if (!(e_new > lo && e_new < hi)) e_new = 0.5 * (lo + hi);
    const double d = mismatch(ws, e_new, m, buf);
    if (!std::isfinite(d)) {
      secant_ok = false;
      continue;
    }
    if (d * d_lo > 0.0) {
      lo = e_new;
      d_lo = d;
      if (side == -1) d_hi *= 0.5;
      side = -1;
    } else if (d * d_hi > 0.0) {
      hi = e_new;
      d_hi = d;
      if (side == 1) d_lo *= 0.5;
      side = 1;
    }
    converged = d == 0.0 || std::abs(e_new - e) <= tol;
    e = e_new;
  }
  if (!converged) {
    throw NumericalError("solve_eigenvalue: no convergence; bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  sol.energy = e;
  sol.iterations = iterations;

  // Assemble the matched wavefunction.
  const double defect = mismatch(ws, sol.energy, m, buf);
  sol.match_defect = std::abs(defect);
  sol.match_index = m;
  const double scale = buf.out[m] / buf.in[m];
  const std::size_t np = ws.size();
  sol.x.resize(np);
  sol.u.assign(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    const double phi = (i <= m) ? buf.out[i] : scale * buf.in[i];
    sol.x[i] = ws.x(i);
    sol.u[i] = std::sqrt(sol.x[i]) * phi;
  }
  const double norm = norm_squared(sol);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("wavefunction has zero norm");
  double inv = 1.0 / std::sqrt(norm);
  // Fix the overall sign so the outermost lobe is positive.
  if (sol.u[m] < 0.0) inv = -inv;
  for (double& v : sol.u) v *= inv;

  sol.nodes = count_sign_changes(sol.u);
  if (sol.nodes != n) {
    throw NumericalError("converged state has " + std::to_string(sol.nodes) + " nodes, expected " +
                         std::to_string(n));
  }

  if (opts.verify_grid) {
    GridConfig fine = grid;
    fine.points = 2 * (grid.points - 1) + 1;
    SolverOptions fine_opts = opts;
    fine_opts.verify_grid = false;
    RadialProblem seeded = prob;
    seeded.seed_energy = sol.energy;
    fine_opts.window_halfwidth = std::max(100.0 * opts.accuracy, 1e-3);
    const double e_fine = solve_eigenvalue(seeded, fine, fine_opts).energy;
    sol.grid_delta = e_fine - sol.energy;
    if (std::abs(sol.grid_delta) > 10.0 * opts.accuracy) {
      throw NumericalError("grid too coarse: halving the step moved E by " +
                           std::to_string(sol.grid_delta));
    }
  }
  return sol;
}

RadialSolution solve_eigenvalue(const RadialProblem& prob) {
  return solve_eigenvalue(prob, default_grid(prob));
}

double norm_squared(const RadialSolution& sol) {
  // dx = x dy on the log grid.
  std::vector<double> g(sol.u.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = sol.u[i] * sol.u[i] * sol.x[i];
  return simpson(g, sol.log_step);
}

void export_wavefunction(const RadialSolution& sol, WaveFormat format, std::ostream& out) {
  char buf[64];
  if (format == WaveFormat::Csv) {
    out << "x,u\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sol.x[i], sol.u[i]);
      out << buf;
    }
    return;
  }
  nlohmann::ordered_json meta;
  meta["energy"] = sol.energy;
  meta["n"] = sol.q.n;
  meta["l"] = sol.q.l;
  meta["N"] = sol.q.dim;
  if (sol.params) {
    meta["alpha"] = sol.params->alpha;
    meta["mu"] = sol.params->mu;
    meta["lambda"] = sol.params->lam;
  } else {
    meta["alpha"] = nullptr;
    meta["mu"] = nullptr;
    meta["lambda"] = nullptr;
  }
  out << meta.dump() << '\n';
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "{\"x\":%.17g,\"u\":%.17g}\n", sol.x[i], sol.u[i]);
    out << buf;
  }
}

}  // namespace spiked
