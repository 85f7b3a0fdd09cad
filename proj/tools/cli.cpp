#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "spiked/analytic.hpp"
#include "spiked/bounds.hpp"
#include "spiked/perturb.hpp"
#include "spiked/solver.hpp"

namespace spiked::cli {
namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Runs fn(0..count-1) on a small worker pool; results keep input order and the
// first failure (in input order) is rethrown.
template <class F>
auto parallel_map(std::size_t count, F fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(count, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            slots[i] = fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

int parse_dim(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("dimension '" + text + "' is not a number");
  }
  if (used != text.size() || v != std::floor(v) || v < 2.0 || v > 1e6) {
    throw std::invalid_argument("dimension must be an integer >= 2, got '" + text + "'");
  }
  return static_cast<int>(v);
}

struct Inputs {
  double lam = 1.0;
  double mu = 10.0;
  double alpha = 2.0;
  double beta = 2.0;
  int n = 0;
  int l = 0;
  std::string dim = "3";
  std::string dims = "2..10";
  std::string which;
  std::string format;
  std::string out;
  std::string out_dir = ".";
  std::string grid;

  CLI::Option* alpha_opt = nullptr;
  CLI::Option* mu_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* l_opt = nullptr;
  CLI::Option* dims_opt = nullptr;

  SpikedOscParams params() const { return {lam, mu, alpha, beta}; }
};

void add_potential_flags(CLI::App* cmd, Inputs& in, bool with_beta) {
  in.lambda_opt = cmd->add_option("--lambda", in.lam, "harmonic coupling lambda > 0")->capture_default_str();
  in.mu_opt = cmd->add_option("--mu", in.mu, "spike coupling mu > 0");
  in.alpha_opt = cmd->add_option("--alpha", in.alpha, "spike exponent alpha > 0");
  if (with_beta) cmd->add_option("--beta", in.beta, "confining exponent beta > 0")->capture_default_str();
  in.n_opt = cmd->add_option("--n", in.n, "radial quantum number")->capture_default_str();
  in.l_opt = cmd->add_option("--l", in.l, "angular momentum")->capture_default_str();
}

void require(const CLI::Option* opt, const std::string& name) {
  if (opt->count() == 0) throw std::invalid_argument(name + " is required");
}

// Flags given explicitly win over a preset.
void apply_preset(Inputs& in, double alpha, int n, int l) {
  if (in.alpha_opt->count() == 0) in.alpha = alpha;
  if (in.mu_opt->count() == 0) in.mu = 10.0;
  if (in.lambda_opt->count() == 0) in.lam = 1.0;
  if (in.n_opt->count() == 0) in.n = n;
  if (in.l_opt->count() == 0) in.l = l;
  if (in.dims_opt->count() == 0) in.dims = "2..10";
}

BoundResult bound_for(const SpikedOscParams& p, const QuantumNumbers& q) {
  return p.beta == 2.0 ? sho_bound_energy(p, q) : power_bound_energy(p, q);
}

RadialSolution solve_with(const SpikedOscParams& p, const QuantumNumbers& q,
                          const std::optional<GridConfig>& grid) {
  const auto prob = reduce_to_radial(p, q);
  return solve_eigenvalue(prob, grid ? *grid : default_grid(prob));
}

std::string header_line(const SpikedOscParams& p, int n, int l) {
  return "# V(x) = " + general(p.lam) + " x^" + general(p.beta) + " + " + general(p.mu) + " / x^" +
         general(p.alpha) + ", n = " + std::to_string(n) + ", l = " + std::to_string(l);
}

// ---------------------------------------------------------------------------

int cmd_bound(Inputs& in, std::ostream& out, std::ostream& err) {
  require(in.alpha_opt, "--alpha");
  require(in.mu_opt, "--mu");
  const auto p = in.params();
  const QuantumNumbers q{in.n, in.l, parse_dim(in.dim)};
  validate(p);
  validate(q);
  const auto r = bound_for(p, q);
  if (r.direction == BoundDirection::NoGuarantee) {
    err << "warning: g and f have opposite curvature; the value is an approximation, not a bound\n";
  }
  const std::string fmt = in.format.empty() ? "human" : in.format;
  if (fmt == "csv") {
    out << "N,n,l,alpha,beta,lambda,mu,energy,direction,s_hat,t_hat,residual\n";
    out << q.dim << ',' << q.n << ',' << q.l << ',' << general(p.alpha) << ',' << general(p.beta)
        << ',' << general(p.lam) << ',' << general(p.mu) << ',' << fixed(r.energy, 6) << ','
        << short_name(r.direction) << ',' << general(r.s_hat) << ',' << general(r.t_hat) << ','
        << general(r.residual) << '\n';
  } else if (fmt == "jsonl") {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"N\":%d,\"n\":%d,\"l\":%d,\"alpha\":%.17g,\"beta\":%.17g,\"lambda\":%.17g,"
                  "\"mu\":%.17g,\"energy\":%.17g,\"direction\":\"%s\",\"s_hat\":%.17g,"
                  "\"t_hat\":%.17g,\"residual\":%.17g}\n",
                  q.dim, q.n, q.l, p.alpha, p.beta, p.lam, p.mu, r.energy,
                  std::string(short_name(r.direction)).c_str(), r.s_hat, r.t_hat, r.residual);
    out << buf;
  } else {
    out << "E(n=" << q.n << ", l=" << q.l << ", N=" << q.dim << ") ~ " << fixed(r.energy, 6) << "  ("
        << describe(r.direction) << ")\n";
    out << "  t_hat = " << general(r.t_hat);
    if (p.beta != 2.0) out << "  s_hat = " << general(r.s_hat);
    out << "  residual = " << general(r.residual) << "\n";
  }
  return kOk;
}

struct TableRow {
  int dim;
  double solver;
  double bound;
  BoundDirection direction;
};

int cmd_table(Inputs& in, std::ostream& out, std::ostream& err) {
  if (in.which == "table1") {
    apply_preset(in, 1.9, 0, 0);
  } else if (in.which == "table2") {
    apply_preset(in, 2.1, 2, 1);
  } else if (!in.which.empty()) {
    throw std::invalid_argument("--which must be table1 or table2");
  } else {
    require(in.alpha_opt, "--alpha");
    require(in.mu_opt, "--mu");
  }
  const auto p = in.params();
  validate(p);
  const auto dims = parse_dims(in.dims);
  const auto grid = resolve_grid(in.grid);
  for (int d : dims) validate(QuantumNumbers{in.n, in.l, d});

  const auto rows = parallel_map(dims.size(), [&](std::size_t i) {
    const QuantumNumbers q{in.n, in.l, dims[i]};
    const auto b = bound_for(p, q);
    const auto s = solve_with(p, q, grid);
    return TableRow{q.dim, s.energy, b.energy, b.direction};
  });
  if (!rows.empty() && rows.front().direction == BoundDirection::NoGuarantee) {
    err << "warning: bound column carries no guarantee for these exponents\n";
  }

  std::ostringstream body;
  const std::string fmt = in.format.empty() ? "csv" : in.format;
  if (fmt == "csv") {
    body << "N,E_solver,E_bound\n";
    for (const auto& r : rows) body << r.dim << ',' << fixed(r.solver, 6) << ',' << fixed(r.bound, 6) << '\n';
  } else if (fmt == "human") {
    body << header_line(p, in.n, in.l) << "\n";
    body << "#  N      E_solver       E_bound  direction\n";
    for (const auto& r : rows) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%4d %13.6f %13.6f  %s\n", r.dim, r.solver, r.bound,
                    std::string(describe(r.direction)).c_str());
      body << buf;
    }
  } else {
    throw std::invalid_argument("table --format must be csv or human");
  }
  if (in.out.empty()) {
    out << body.str();
  } else {
    write_file_atomically(in.out, body.str());
  }
  return kOk;
}

WaveFormat wave_format(const std::string& name) {
  if (name.empty() || name == "csv") return WaveFormat::Csv;
  if (name == "jsonl") return WaveFormat::JsonLines;
  throw std::invalid_argument("wavefunction --format must be csv or jsonl");
}

int cmd_solve(Inputs& in, std::ostream& out, std::ostream&) {
  require(in.alpha_opt, "--alpha");
  require(in.mu_opt, "--mu");
  const auto p = in.params();
  const QuantumNumbers q{in.n, in.l, parse_dim(in.dim)};
  validate(p);
  validate(q);
  const auto format = wave_format(in.format);
  const auto sol = solve_with(p, q, resolve_grid(in.grid));

  out << "E(n=" << q.n << ", l=" << q.l << ", N=" << q.dim << ") = " << fixed(sol.energy, 8) << "\n";
  out << "  nodes = " << sol.nodes << "  match defect = " << general(sol.match_defect)
      << "  half-step change = " << general(sol.grid_delta) << "\n";
  if (!in.out.empty()) {
    std::ostringstream os;
    export_wavefunction(sol, format, os);
    write_file_atomically(in.out, os.str());
    out << "  wavefunction written to " << in.out << "\n";
  }
  return kOk;
}

int cmd_plot_data(Inputs& in, std::ostream& out, std::ostream&) {
  if (in.which == "fig1") {
    apply_preset(in, 1.9, 0, 0);
  } else if (in.which == "fig2") {
    apply_preset(in, 2.1, 2, 1);
  } else if (!in.which.empty()) {
    throw std::invalid_argument("--which must be fig1 or fig2");
  } else {
    require(in.alpha_opt, "--alpha");
    require(in.mu_opt, "--mu");
  }
  const auto p = in.params();
  validate(p);
  const auto format = wave_format(in.format);
  const auto dims = parse_dims(in.dims);
  const auto grid = resolve_grid(in.grid);
  for (int d : dims) validate(QuantumNumbers{in.n, in.l, d});

  struct Item {
    RadialSolution sol;
    double bound;
  };
  const auto items = parallel_map(dims.size(), [&](std::size_t i) {
    const QuantumNumbers q{in.n, in.l, dims[i]};
    return Item{solve_with(p, q, grid), bound_for(p, q).energy};
  });

  std::filesystem::create_directories(in.out_dir);
  const std::string ext = format == WaveFormat::Csv ? ".csv" : ".jsonl";
  std::ostringstream summary;
  summary << "N,n,l,E_solver,E_bound,nodes,file\n";
  for (const auto& it : items) {
    const std::string name = "wavefunction_N" + std::to_string(it.sol.q.dim) + ext;
    std::ostringstream os;
    export_wavefunction(it.sol, format, os);
    write_file_atomically((std::filesystem::path(in.out_dir) / name).string(), os.str());
    summary << it.sol.q.dim << ',' << it.sol.q.n << ',' << it.sol.q.l << ',' << fixed(it.sol.energy, 6)
            << ',' << fixed(it.bound, 6) << ',' << it.sol.nodes << ',' << name << '\n';
  }
  write_file_atomically((std::filesystem::path(in.out_dir) / "eigenvalues.csv").string(), summary.str());
  out << summary.str();
  return kOk;
}

int cmd_perturb(Inputs& in, std::ostream& out, std::ostream& err) {
  require(in.alpha_opt, "--alpha");
  require(in.mu_opt, "--mu");
  const QuantumNumbers q{in.n, in.l, parse_dim(in.dim)};
  validate(q);
  const auto r = perturbation_estimate(in.mu, in.alpha, q, resolve_grid(in.grid));
  if (r.refine_grid_advised) {
    err << "warning: " << general(r.inner_fraction)
        << " of E'(2) comes from near x_min; consider refining the grid\n";
  }
  out << "E(2)     = " << fixed(r.e_at_2, 6) << "\n";
  out << "E'(2)    = " << fixed(r.de_dalpha, 6) << "\n";
  out << "E(" << general(r.alpha) << ") ~ " << fixed(r.estimate, 6) << "  (first order, not a bound)\n";
  return kOk;
}

}  // namespace

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const int a = parse_dim(text.substr(0, range));
    const int b = parse_dim(text.substr(range + 2));
    if (b < a) throw std::invalid_argument("empty dimension range '" + text + "'");
    for (int d = a; d <= b; ++d) dims.push_back(d);
    return dims;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) dims.push_back(parse_dim(item));
  if (dims.empty()) throw std::invalid_argument("no dimensions given");
  return dims;
}

GridConfig parse_grid(const std::string& text) {
  GridConfig g;
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) ||
      c.find(':') != std::string::npos) {
    throw std::invalid_argument("grid must look like xmin:xmax:points, got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    g.x_min = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.x_max = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    g.points = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like xmin:xmax:points, got '" + text + "'");
  }
  validate(g);
  return g;
}

std::optional<GridConfig> resolve_grid(const std::string& flag_value) {
  if (!flag_value.empty()) return parse_grid(flag_value);
  if (const char* env = std::getenv("SPIKED_BOUNDS_GRID"); env != nullptr && *env != '\0') {
    return parse_grid(env);
  }
  return std::nullopt;
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << contents;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalue bounds for -Delta + lambda x^beta + mu / x^alpha in N dimensions"};
  app.name("spiked-bounds");
  app.require_subcommand(1);
  Inputs in;

  auto* bound = app.add_subcommand("bound", "bound formula for one state");
  add_potential_flags(bound, in, true);
  bound->add_option("--dim", in.dim, "spatial dimension N >= 2")->capture_default_str();
  bound->add_option("--format", in.format, "human | csv | jsonl");

  auto* table = app.add_subcommand("table", "solver and bound columns over a range of dimensions");
  add_potential_flags(table, in, true);
  in.dims_opt = table->add_option("--dims", in.dims, "dimensions, e.g. 2..10 or 2,3,5")->capture_default_str();
  table->add_option("--which", in.which, "preset: table1 | table2");
  table->add_option("--format", in.format, "csv | human");
  table->add_option("--out", in.out, "output file (default: standard output)");
  table->add_option("--grid", in.grid, "xmin:xmax:points");
  auto* dims_table = in.dims_opt;

  auto* solve = app.add_subcommand("solve", "numerical eigenvalue and wavefunction");
  add_potential_flags(solve, in, true);
  solve->add_option("--dim", in.dim, "spatial dimension N >= 2")->capture_default_str();
  solve->add_option("--format", in.format, "wavefunction format: csv | jsonl");
  solve->add_option("--out", in.out, "wavefunction output file");
  solve->add_option("--grid", in.grid, "xmin:xmax:points");

  auto* plot = app.add_subcommand("plot-data", "per-dimension wavefunction files");
  add_potential_flags(plot, in, true);
  auto* dims_plot = plot->add_option("--dims", in.dims, "dimensions, e.g. 2..10")->capture_default_str();
  plot->add_option("--which", in.which, "preset: fig1 | fig2");
  plot->add_option("--format", in.format, "csv | jsonl");
  plot->add_option("--out-dir", in.out_dir, "output directory")->capture_default_str();
  plot->add_option("--grid", in.grid, "xmin:xmax:points");

  auto* perturb = app.add_subcommand("perturb", "first-order expansion in alpha about alpha = 2 (lambda = 1)");
  in.mu_opt = perturb->add_option("--mu", in.mu, "spike coupling mu > 0");
  in.alpha_opt = perturb->add_option("--alpha", in.alpha, "target exponent alpha");
  in.n_opt = perturb->add_option("--n", in.n, "radial quantum number")->capture_default_str();
  in.l_opt = perturb->add_option("--l", in.l, "angular momentum")->capture_default_str();
  perturb->add_option("--dim", in.dim, "spatial dimension N >= 2")->capture_default_str();
  perturb->add_option("--grid", in.grid, "xmin:xmax:points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  // Each subcommand registered its own option pointers; rebind to the one that ran.
  auto rebind = [&](CLI::App* cmd) {
    in.alpha_opt = cmd->get_option_no_throw("--alpha");
    in.mu_opt = cmd->get_option_no_throw("--mu");
    in.lambda_opt = cmd->get_option_no_throw("--lambda");
    in.n_opt = cmd->get_option_no_throw("--n");
    in.l_opt = cmd->get_option_no_throw("--l");
  };

  try {
    if (*bound) {
      rebind(bound);
      return cmd_bound(in, out, err);
    }
    if (*table) {
      rebind(table);
      in.dims_opt = dims_table;
      return cmd_table(in, out, err);
    }
    if (*solve) {
      rebind(solve);
      return cmd_solve(in, out, err);
    }
    if (*plot) {
      rebind(plot);
      in.dims_opt = dims_plot;
      return cmd_plot_data(in, out, err);
    }
    if (*perturb) {
      rebind(perturb);
      return cmd_perturb(in, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInvalidInput;
}

}  // namespace spiked::cli
