#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "json.hpp"
#include "spiked/analytic.hpp"
#include "spiked/solver.hpp"

namespace spiked {
namespace {

RadialSolution solve(double alpha, double mu, QuantumNumbers q, double lam = 1.0) {
  return solve_eigenvalue(reduce_to_radial(SpikedOscParams{lam, mu, alpha, 2.0}, q));
}

TEST(ReduceToRadial, ThreeDimensionalSWaveKeepsPotential) {
  const auto prob = reduce_to_radial(SpikedOscParams{1.0, 10.0, 1.9, 2.0}, {0, 0, 3});
  for (double x : {0.05, 0.7, 3.0}) {
    EXPECT_DOUBLE_EQ(prob.effective_potential(x), x * x + 10.0 * std::pow(x, -1.9));
  }
}

TEST(ReduceToRadial, CentrifugalTermForLargeDimension) {
  const auto prob = reduce_to_radial(SpikedOscParams{1.0, 10.0, 2.1, 2.0}, {2, 1, 10});
  for (double x : {0.05, 0.7, 3.0}) {
    EXPECT_NEAR(prob.effective_potential(x), x * x + 10.0 * std::pow(x, -2.1) + 24.75 / (x * x),
                1e-12 * prob.effective_potential(x));
  }
}

TEST(ReduceToRadial, TwoDimensionalOscillator) {
  TransformPair pair;
  pair.g = [](double u) { return u; };
  pair.dg = [](double) { return 1.0; };
  pair.f = [](double) { return 0.0; };
  pair.df = [](double) { return 0.0; };
  const auto prob = reduce_to_radial(pair, {0, 0, 2});
  EXPECT_DOUBLE_EQ(prob.effective_potential(0.5), 0.25 - 1.0);
  EXPECT_NEAR(prob.seed_energy, 2.0, 1e-12);
}

TEST(SolveEigenvalue, TableOneFirstRow) {
  const auto s = solve(1.9, 10.0, {0, 0, 2});
  EXPECT_NEAR(s.energy, 8.48538, 5e-5);
  EXPECT_EQ(s.nodes, 0);
}

TEST(SolveEigenvalue, TableTwoMiddleRow) {
  const auto s = solve(2.1, 10.0, {2, 1, 5});
  EXPECT_NEAR(s.energy, 17.95544, 5e-5);
  EXPECT_EQ(s.nodes, 2);
}

TEST(SolveEigenvalue, ClosedFormSpectrumThreeDimensions) {
  const auto s = solve(2.0, 10.0, {0, 0, 3});
  EXPECT_NEAR(s.energy, 2.0 * (1.0 + std::sqrt(10.25)), 1e-5);
  EXPECT_NEAR(s.energy, 8.40312, 1e-5);
}

TEST(SolveEigenvalue, AgreesWithClosedFormAtAlphaTwo) {
  for (double mu : {1.0, 10.0})
    for (int n = 0; n <= 2; ++n)
      for (int l = 0; l <= 2; ++l)
        for (int dim : {2, 3, 4, 7, 10}) {
          const QuantumNumbers q{n, l, dim};
          EXPECT_NEAR(solve(2.0, mu, q).energy, gk_energy(1.0, mu, q), 2e-5)
              << mu << " " << n << " " << l << " " << dim;
        }
}

TEST(SolveEigenvalue, PureOscillator) {
  TransformPair pair;
  pair.g = [](double u) { return u; };
  pair.dg = [](double) { return 1.0; };
  pair.f = [](double) { return 0.0; };
  pair.df = [](double) { return 0.0; };
  for (int dim = 2; dim <= 10; ++dim)
    for (int n = 0; n <= 2; ++n)
      for (int l = 0; l <= 2; ++l) {
        const QuantumNumbers q{n, l, dim};
        const auto s = solve_eigenvalue(reduce_to_radial(pair, q));
        EXPECT_NEAR(s.energy, harmonic_energy(1.0, q), 1e-6) << dim << " " << n << " " << l;
      }
}

TEST(SolveEigenvalue, HalvingStepIsStable) {
  for (int dim = 2; dim <= 10; ++dim) {
    const auto prob = reduce_to_radial(SpikedOscParams{1.0, 10.0, 1.9, 2.0}, {0, 0, dim});
    GridConfig g = default_grid(prob);
    SolverOptions opts;
    opts.verify_grid = false;
    const double coarse = solve_eigenvalue(prob, g, opts).energy;
    g.points = 2 * (g.points - 1) + 1;
    const double fine = solve_eigenvalue(prob, g, opts).energy;
    EXPECT_LE(std::abs(fine - coarse), 1e-6) << dim;
  }
}

TEST(SolveEigenvalue, WavefunctionIsNormalizedWithRequestedNodes) {
  for (int n = 0; n <= 3; ++n) {
    const auto s = solve(2.1, 10.0, {n, 1, 4});
    EXPECT_NEAR(norm_squared(s), 1.0, 1e-8);
    EXPECT_EQ(s.nodes, n);
    EXPECT_EQ(count_sign_changes(s.u), n);
    EXPECT_LT(s.match_defect, 1e-6);
  }
}

TEST(SolveEigenvalue, NodeCountIsMonotoneInEnergy) {
  const auto prob = reduce_to_radial(SpikedOscParams{1.0, 10.0, 1.9, 2.0}, {0, 0, 3});
  const auto grid = default_grid(prob);
  int prev = 0;
  for (double e = 0.0; e < 40.0; e += 0.5) {
    const int c = count_nodes(prob, grid, e);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_EQ(count_nodes(prob, grid, 8.0), 0);
  EXPECT_EQ(count_nodes(prob, grid, 9.0), 1);
}

TEST(SolveEigenvalue, HarmonicGroundStateShape) {
  TransformPair pair;
  pair.g = [](double u) { return u; };
  pair.dg = [](double) { return 1.0; };
  pair.f = [](double) { return 0.0; };
  pair.df = [](double) { return 0.0; };
  const auto s = solve_eigenvalue(reduce_to_radial(pair, {0, 0, 3}));
  // u = c x exp(-x^2/2) with c^2 = 4 / sqrt(pi)
  const double c = std::sqrt(4.0 / std::sqrt(M_PI));
  for (std::size_t i = 0; i < s.x.size(); i += 997) {
    const double x = s.x[i];
    EXPECT_NEAR(s.u[i], c * x * std::exp(-0.5 * x * x), 1e-6) << x;
  }
}

TEST(SolveEigenvalue, ExcitedStatesOfQuarticSpike) {
  const SpikedOscParams p{1.0, 1.0, 4.0, 4.0};
  double prev = -1.0;
  for (int n = 0; n <= 3; ++n) {
    const auto s = solve_eigenvalue(reduce_to_radial(p, {n, 0, 3}));
    EXPECT_EQ(s.nodes, n);
    EXPECT_GT(s.energy, prev);
    prev = s.energy;
  }
}

TEST(SolveEigenvalue, WideOuterGridAgreesWithDefault) {
  // The quartic tail is unresolvable near x = 17; node counting must cope.
  const auto prob = reduce_to_radial(SpikedOscParams{1.0, 1.0, 4.0, 4.0}, {3, 0, 3});
  const double wide = solve_eigenvalue(prob, GridConfig{1e-5, 17.5, 20001}, {}).energy;
  EXPECT_NEAR(wide, solve_eigenvalue(prob).energy, 1e-6);
  EXPECT_EQ(count_nodes(prob, GridConfig{1e-5, 17.5, 20001}, 35.0), 3);
}

TEST(SolveEigenvalue, CoarseGridIsDetected) {
  const auto prob = reduce_to_radial(SpikedOscParams{1.0, 10.0, 2.1, 2.0}, {2, 1, 10});
  GridConfig g{1e-5, 12.0, 1001};
  SolverOptions opts;
  opts.accuracy = 1e-9;
  EXPECT_THROW(solve_eigenvalue(prob, g, opts), NumericalError);
}

TEST(SolveEigenvalue, EmptyWindowIsReported) {
  auto prob = reduce_to_radial(SpikedOscParams{1.0, 10.0, 2.0, 2.0}, {0, 0, 3});
  SolverOptions opts;
  opts.max_widen = 0;
  prob.seed_energy = 100.0;
  EXPECT_THROW(solve_eigenvalue(prob, default_grid(prob), opts), NumericalError);
}

TEST(GridConfig, Validation) {
  EXPECT_THROW(validate(GridConfig{0.0, 10.0, 20001}), std::invalid_argument);
  EXPECT_THROW(validate(GridConfig{1.0, 0.5, 20001}), std::invalid_argument);
  EXPECT_THROW(validate(GridConfig{1e-5, 10.0, 999}), std::invalid_argument);
  EXPECT_THROW(validate(GridConfig{1e-5, 10.0, 20000}), std::invalid_argument);
  EXPECT_NO_THROW(validate(GridConfig{1e-5, 10.0, 20001}));
}

TEST(DefaultGrid, CoversTurningPoint) {
  const auto prob = reduce_to_radial(SpikedOscParams{0.1, 1.0, 1.0, 2.0}, {0, 0, 3});
  const auto g = default_grid(prob);
  const double e = prob.seed_energy + 2.0;
  EXPECT_GE(g.x_max, 10.0);
  EXPECT_GT(prob.effective_potential(g.x_max), 4.0 * e);
}

TEST(ExportWavefunction, CsvLayout) {
  const auto s = solve(2.0, 10.0, {0, 0, 3});
  std::ostringstream os;
  export_wavefunction(s, WaveFormat::Csv, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,u");
  std::size_t rows = 0;
  std::string first;
  while (std::getline(is, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  EXPECT_EQ(rows, s.x.size());
  const auto comma = first.find(',');
  ASSERT_NE(comma, std::string::npos);
  EXPECT_EQ(std::stod(first.substr(0, comma)), s.x[0]);
}

TEST(ExportWavefunction, JsonLinesRoundTrip) {
  const auto s = solve(2.1, 10.0, {2, 1, 5});
  std::ostringstream os;
  export_wavefunction(s, WaveFormat::JsonLines, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  const auto meta = nlohmann::json::parse(line);
  EXPECT_EQ(meta.at("energy").get<double>(), s.energy);
  EXPECT_EQ(meta.at("n").get<int>(), 2);
  EXPECT_EQ(meta.at("l").get<int>(), 1);
  EXPECT_EQ(meta.at("N").get<int>(), 5);
  EXPECT_EQ(meta.at("alpha").get<double>(), 2.1);
  EXPECT_EQ(meta.at("mu").get<double>(), 10.0);
  EXPECT_EQ(meta.at("lambda").get<double>(), 1.0);
  std::size_t i = 0;
  while (std::getline(is, line)) {
    const auto row = nlohmann::json::parse(line);
    ASSERT_LT(i, s.x.size());
    EXPECT_EQ(row.at("x").get<double>(), s.x[i]);
    EXPECT_EQ(row.at("u").get<double>(), s.u[i]);
    ++i;
  }
  EXPECT_EQ(i, s.x.size());
}

}  // namespace
}  // namespace spiked
