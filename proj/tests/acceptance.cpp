// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "spiked/analytic.hpp"
#include "spiked/bounds.hpp"
#include "spiked/perturb.hpp"
#include "spiked/solver.hpp"

#ifndef SPIKED_GOLDEN_DIR
#error "SPIKED_GOLDEN_DIR must point at tests/golden"
#endif

namespace {

using namespace spiked;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::array<double, 9> kTable1Bound{8.51190, 8.59021, 8.81947, 9.18461, 9.66548,
                                             10.24120, 10.89289, 11.60478, 12.36429};
constexpr std::array<double, 9> kTable1Solver{8.48538, 8.56436, 8.79544, 9.16309, 9.64670,
                                              10.22505, 10.87908, 11.59298, 12.35418};
constexpr std::array<double, 9> kTable2Bound{16.45773, 16.82641, 17.31254, 17.89507, 18.55481,
                                             19.27558, 20.04444, 20.85125, 21.68822};
constexpr std::array<double, 9> kTable2Solver{16.54363, 16.90444, 17.38171, 17.95544, 18.60707,
                                              19.32069, 20.08341, 20.88502, 21.71761};

const SpikedOscParams kTable1Params{1.0, 10.0, 1.9, 2.0};
const SpikedOscParams kTable2Params{1.0, 10.0, 2.1, 2.0};
const QuantumNumbers kTable1State{0, 0, 3};
const QuantumNumbers kTable2State{2, 1, 3};

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %-34s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body, turning any exception into a failed line.
void criterion(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

void bound_column(const std::string& name, const SpikedOscParams& p, QuantumNumbers q,
                  const std::array<double, 9>& expected) {
  criterion(name, [&] {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int dim = 2; dim <= 10; ++dim) {
      q.dim = dim;
      worst = std::max(worst, std::abs(sho_bound_energy(p, q).energy - expected[dim - 2]));
    }
    const double elapsed = seconds_since(start);
    report(name, worst <= 1e-4 && elapsed < 0.1,
           fmt("max err %.2e (tol 1e-4), %.4f s (limit 0.1 s)", worst, elapsed));
  });
}

void solver_columns() {
  criterion("table 1/2 solver columns", [] {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int dim = 2; dim <= 10; ++dim) {
      QuantumNumbers q1 = kTable1State, q2 = kTable2State;
      q1.dim = q2.dim = dim;
      const double e1 = solve_eigenvalue(reduce_to_radial(kTable1Params, q1)).energy;
      const double e2 = solve_eigenvalue(reduce_to_radial(kTable2Params, q2)).energy;
      worst = std::max({worst, std::abs(e1 - kTable1Solver[dim - 2]),
                        std::abs(e2 - kTable2Solver[dim - 2])});
    }
    const double elapsed = seconds_since(start);
    report("table 1/2 solver columns", worst <= 5e-4 && elapsed < 30.0,
           fmt("max err %.2e (tol 5e-4), %.2f s (limit 30 s)", worst, elapsed));
  });
}

template <class Fn>
void for_each_grid_state(Fn&& fn) {
  for (double mu : {1.0, 10.0})
    for (int n = 0; n <= 2; ++n)
      for (int l = 0; l <= 1; ++l)
        for (int dim : {2, 3, 5, 10}) fn(mu, QuantumNumbers{n, l, dim});
}

void direction_suite() {
  criterion("bound direction suite", [] {
    int checked = 0, bad = 0;
    double worst_slack = -std::numeric_limits<double>::infinity(), worst_exact = 0.0;
    for_each_grid_state([&](double mu, const QuantumNumbers& q) {
      for (double alpha : {1.5, 1.9, 2.0, 2.1, 3.0}) {
        const SpikedOscParams p{1.0, mu, alpha, 2.0};
        const double bound = sho_bound_energy(p, q).energy;
        ++checked;
        if (alpha == 2.0) {
          const double err = std::abs(bound - gk_energy(1.0, mu, q));
          worst_exact = std::max(worst_exact, err);
          if (err > 1e-9) ++bad;
          continue;
        }
        const double exact = solve_eigenvalue(reduce_to_radial(p, q)).energy;
        // Positive slack means the inequality is violated.
        const double slack = alpha < 2.0 ? exact - bound : bound - exact;
        worst_slack = std::max(worst_slack, slack);
        if (slack > 5e-4) ++bad;
      }
    });
    std::ostringstream detail;
    detail << checked << " cases, " << bad << " violations; worst slack "
           << fmt("%.2e (tol 5e-4), alpha=2 err %.2e (tol 1e-9)", worst_slack, worst_exact);
    report("bound direction suite", bad == 0, detail.str());
  });
}

void perturbation() {
  criterion("perturbation derivative/estimate", [] {
    const auto low = perturbation_estimate(10.0, 1.9, QuantumNumbers{0, 0, 2});
    const auto high = perturbation_estimate(10.0, 1.9, QuantumNumbers{0, 0, 10});
    const bool pass = std::abs(low.de_dalpha + 1.557) <= 5e-3 &&
                      std::abs(high.de_dalpha + 1.498) <= 5e-3 &&
                      std::abs(low.estimate - 8.4803) <= 1e-3 &&
                      std::abs(high.estimate - 12.3479) <= 1e-3;
    std::ostringstream detail;
    detail << fmt("E'(2) %.5f, %.5f; ", low.de_dalpha, high.de_dalpha)
           << fmt("estimates %.5f, %.5f", low.estimate, high.estimate);
    report("perturbation derivative/estimate", pass, detail.str());
  });
}

void root_properties() {
  criterion("root equation properties", [] {
    int bad_sign = 0, bad_residual = 0, bad_stationary = 0, cases = 0;
    for_each_grid_state([&](double mu, const QuantumNumbers& q) {
      for (double alpha : {1.5, 1.9, 2.0, 2.1, 3.0}) {
        const SpikedOscParams p{1.0, mu, alpha, 2.0};
        const double lambda = effective_lambda(q).lambda_eff;
        ++cases;
        int changes = 0;
        double prev = root_function(p, lambda, 1e-4);
        constexpr int kPoints = 20001;
        for (int i = 1; i < kPoints; ++i) {
          const double t = std::pow(10.0, -4.0 + 8.0 * i / (kPoints - 1));
          const double h = root_function(p, lambda, t);
          if ((h > 0) != (prev > 0)) ++changes;
          prev = h;
        }
        if (changes != 1) ++bad_sign;
        const double t_hat = solve_root_t(p, lambda).t;
        const double scale = std::max(1.0, 2.0 * std::pow(t_hat, 4));
        if (std::abs(root_function(p, lambda, t_hat)) > 1e-10 * scale) ++bad_residual;
        if (alpha < 2.0) {
          const double ts = root_stationary_point(p);
          if (std::abs(root_function_derivative(p, ts)) >
              1e-9 * std::abs(root_function_second_derivative(p, ts)) * ts)
            ++bad_stationary;
        }
      }
    });
    std::ostringstream detail;
    detail << cases << " cases; sign-change failures " << bad_sign << ", residual failures "
           << bad_residual << ", stationary-point failures " << bad_stationary;
    report("root equation properties", bad_sign + bad_residual + bad_stationary == 0, detail.str());
  });
}

void oracle_identities() {
  criterion("oracle identities", [] {
    double gk_err = 0.0, harmonic_err = 0.0, path_err = 0.0;
    for_each_grid_state([&](double mu, const QuantumNumbers& q) {
      const SpikedOscParams exact_case{1.0, mu, 2.0, 2.0};
      const double solved = solve_eigenvalue(reduce_to_radial(exact_case, q)).energy;
      gk_err = std::max(gk_err, std::abs(solved - gk_energy(1.0, mu, q)));
      harmonic_err = std::max(harmonic_err,
                              std::abs(gk_energy(1.0, 0.0, q) - harmonic_energy(1.0, q)));
      harmonic_err = std::max(harmonic_err,
                              std::abs(gk_energy(1.0, 1e-14, q) - harmonic_energy(1.0, q)));
      for (double alpha : {1.5, 1.9, 2.1, 3.0}) {
        const SpikedOscParams p{1.0, mu, alpha, 2.0};
        path_err = std::max(path_err, std::abs(power_bound_energy(p, q).energy -
                                               sho_bound_energy(p, q).energy));
      }
    });
    const bool pass = gk_err <= 2e-5 && harmonic_err <= 1e-6 && path_err <= 1e-8;
    std::ostringstream detail;
    detail << fmt("gk vs solver %.2e (tol 2e-5), mu->0 %.2e (tol 1e-6), ", gk_err, harmonic_err)
           << fmt("beta=2 paths %.2e (tol 1e-8)", path_err);
    report("oracle identities", pass, detail.str());
  });
}

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "spiked-bounds");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void cli_goldens() {
  criterion("cli goldens and fig2 nodes", [] {
    const fs::path golden_dir = SPIKED_GOLDEN_DIR;
    int code1 = 0, code2 = 0, code3 = 0;
    const bool t1 = run_cli({"table", "--which", "table1"}, code1) == slurp(golden_dir / "table1.csv");
    const bool t2 = run_cli({"table", "--which", "table2"}, code2) == slurp(golden_dir / "table2.csv");

    const auto dir = fs::temp_directory_path() / "spiked_acceptance_fig2";
    fs::remove_all(dir);
    run_cli({"plot-data", "--which", "fig2", "--out-dir", dir.string()}, code3);
    int good_files = 0;
    for (int dim = 2; dim <= 10; ++dim) {
      std::ifstream f(dir / ("wavefunction_N" + std::to_string(dim) + ".csv"));
      std::string line;
      if (!std::getline(f, line)) continue;
      std::vector<double> u;
      while (std::getline(f, line)) u.push_back(std::stod(line.substr(line.find(',') + 1)));
      if (count_sign_changes(u) == 2) ++good_files;
    }
    fs::remove_all(dir);
    const bool pass = t1 && t2 && code1 == 0 && code2 == 0 && code3 == 0 && good_files == 9;
    std::ostringstream detail;
    detail << "table1 " << (t1 ? "match" : "DIFFERS") << ", table2 " << (t2 ? "match" : "DIFFERS")
           << ", fig2 files with 2 sign changes: " << good_files << "/9";
    report("cli goldens and fig2 nodes", pass, detail.str());
  });
}

}  // namespace

int main() {
  bound_column("table 1 bound column", kTable1Params, kTable1State, kTable1Bound);
  bound_column("table 2 bound column", kTable2Params, kTable2State, kTable2Bound);
  solver_columns();
  direction_suite();
  perturbation();
  root_properties();
  oracle_identities();
  cli_goldens();
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
