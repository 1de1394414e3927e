#include "paw1d/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "paw1d/errors.hpp"
#include "paw1d/model.hpp"
#include "paw1d/study.hpp"

namespace paw1d {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CutoffShape parse_shape(const std::string& s) {
  if (s == "bump") return CutoffShape::bump;
  if (s == "narrow") return CutoffShape::narrow;
  throw ValidationError("unknown cut-off shape '" + s + "' (expected bump or narrow)");
}

std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  return f;
}

// |psi0(x)| against |psi0(a - x)| on a grid; true when the ground state is
// symmetric about a/2.
bool mirror_symmetric(const ModelParams& p, const ExactEigenpair& ground) {
  const auto psi = eigenfunction_evaluator(p, ground);
  double worst = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double x = k / 200.0;
    worst = std::max(worst, std::abs(std::abs(psi.value(x)) -
                                     std::abs(psi.value(reduce_periodic(p.a - x)))));
  }
  return worst < 1e-8;
}

int cmd_exact(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.model;
  const auto neg = bound_states(p);
  const auto pos = positive_spectrum(p, cfg.positive);
  std::vector<ExactEigenpair> all = neg;
  all.insert(all.end(), pos.begin(), pos.end());

  std::ostringstream csv;
  csv << "branch,index,omega,energy,residual,jump_origin,jump_a\n";
  out << "a = " << fmt(p.a) << "  Z0 = " << fmt(p.Z0) << "  Za = " << fmt(p.Za) << '\n';
  out << "branch    index  omega                    energy                   residual   "
         "jump_origin  jump_a\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& e = all[i];
    const bool negative = e.branch == Branch::negative;
    const int index = negative ? static_cast<int>(i) : static_cast<int>(i - neg.size());
    const double res = characteristic_relative_residual(p, e.branch, e.omega);
    const auto jr = jump_residuals(p, e);
    char line[256];
    std::snprintf(line, sizeof line, "%-9s %5d  %-23.17g  %-23.17g  %.2e   %.2e     %.2e\n",
                  negative ? "negative" : "positive", index, e.omega, e.energy, res,
                  std::abs(jr.at_origin), std::abs(jr.at_a));
    out << line;
    csv << (negative ? "negative" : "positive") << ',' << index << ',' << fmt(e.omega) << ','
        << fmt(e.energy) << ',' << fmt(res) << ',' << fmt(jr.at_origin) << ',' << fmt(jr.at_a)
        << '\n';
  }
  out << "E0 = " << fmt(neg.front().energy) << '\n';
  out << "mirror_symmetric = " << (mirror_symmetric(p, neg.front()) ? "true" : "false") << '\n';
  if (!cfg.output.empty()) {
    auto f = open_output(cfg.output);
    f << csv.str();
  }
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Method method = cfg.methods.front();
  const PawSetup setup = cfg.setup();
  const double E0 = ground_state_energy(cfg.model);
  const GalerkinSystem sys = assemble(method, cfg.model, setup, cfg.M, cfg.origin);
  EigOptions eo = cfg.eig;
  eo.context = "method=" + std::string(to_string(method)) + " M=" + std::to_string(cfg.M) +
               (method == Method::direct ? "" : " eta=" + fmt(setup.eta));
  const EigResult r = smallest_generalized(sys.A, sys.B, eo);

  out << "method = " << to_string(method) << '\n' << "M = " << cfg.M << '\n';
  if (method != Method::direct)
    out << "eta = " << fmt(setup.eta) << "\nN = " << setup.N << "\nd = " << setup.d << '\n';
  out << "lambda = " << fmt(r.lambda) << '\n'
      << "E0 = " << fmt(E0) << '\n'
      << "error = " << fmt(r.lambda - E0) << '\n'
      << "residual = " << fmt(r.residual) << '\n';

  if (!cfg.dump.empty()) {
    if (cfg.dump_format == "binary") {
      auto f = open_output(cfg.dump, true);
      write_binary_dump(f, sys);
    } else {
      auto f = open_output(cfg.dump);
      write_text_dump(f, sys);
    }
  }
  if (!cfg.vector_output.empty()) {
    auto f = open_output(cfg.vector_output);
    f << "n,re,im\n";
    for (Eigen::Index k = 0; k < r.vector.size(); ++k)
      f << (k - cfg.M) << ',' << fmt(r.vector(k).real()) << ',' << fmt(r.vector(k).imag()) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SweepOptions so;
  so.timing = cfg.timing;
  so.origin = cfg.origin;
  so.eig = cfg.eig;
  const bool by_eta = cfg.sweep == "eta";
  const std::vector<int> Ns = cfg.N_grid.empty() ? std::vector<int>{cfg.N} : cfg.N_grid;
  std::vector<SweepRecord> rows;
  std::vector<PlotSeries> series;
  for (Method method : cfg.methods) {
    const bool paw = method != Method::direct;
    for (int N : paw ? Ns : std::vector<int>{0}) {
      PawSetup setup = cfg.setup();
      if (paw) setup.N = N;
      std::vector<SweepRecord> part;
      if (by_eta) {
        const auto& grid = cfg.eta_grid.empty() ? default_eta_grid() : cfg.eta_grid;
        part = eta_sweep(method, cfg.model, setup, cfg.M, grid, so);
      } else {
        const std::vector<int> grid = cfg.M_grid.empty() ? std::vector<int>{cfg.M} : cfg.M_grid;
        part = m_sweep(method, cfg.model, setup, grid, so);
      }
      rows.insert(rows.end(), part.begin(), part.end());
      series.push_back({method, paw && Ns.size() > 1 ? N : 0});
    }
  }
  int failed = 0;
  for (const auto& r : rows)
    if (!r.ok()) ++failed;

  if (cfg.output.empty()) {
    write_csv(out, rows);
  } else {
    auto f = open_output(cfg.output);
    write_csv(f, rows);
  }
  if (!cfg.plot.empty()) {
    auto f = open_output(cfg.plot);
    write_gnuplot(f, cfg.output, by_eta ? Abscissa::eta : Abscissa::M, series,
                  by_eta ? "eigenvalue error vs cut-off radius" : "eigenvalue error vs M");
  }
  if (failed) err << failed << " of " << rows.size() << " sweep points failed; see error_code\n";
  return failed == static_cast<int>(rows.size()) ? kExitNumerical : kExitOk;
}

}  // namespace

PawSetup RunConfig::setup() const {
  PawSetup s = PawSetup::make(eta, N, d);
  s.epsilon = epsilon > 0.0 ? epsilon : eta;
  s.rho_shape = rho_shape;
  s.chi_shape = chi_shape;
  s.quadrature_nodes = nodes;
  return s;
}

void RunConfig::validate() const {
  model.validate();
  if (methods.empty()) throw ValidationError("at least one method is required");
  if (M < 1) throw ValidationError("M must be >= 1");
  for (int m : M_grid)
    if (m < 1) throw ValidationError("M must be >= 1");
  if (sweep != "eta" && sweep != "M") throw ValidationError("sweep must be eta or M");
  if (positive < 0) throw ValidationError("positive must be >= 0");
  if (dump_format != "text" && dump_format != "binary")
    throw ValidationError("dump-format must be text or binary");
  if (!plot.empty() && output.empty())
    throw ValidationError("plot requires output (the script reads the CSV file)");
  if (eig.tolerance <= 0.0) throw ValidationError("eig-tolerance must be positive");
  if (eig.max_iterations < 1) throw ValidationError("eig-max-iterations must be >= 1");
  if (nodes < 2) throw ValidationError("nodes must be >= 2");
  bool paw = false;
  for (Method m : methods) paw = paw || m != Method::direct;
  if (!paw) return;
  const std::vector<int> Ns = N_grid.empty() ? std::vector<int>{N} : N_grid;
  const std::vector<double> etas = eta_grid.empty() ? std::vector<double>{eta} : eta_grid;
  for (int n : Ns)
    for (double e : sweep == "eta" ? etas : std::vector<double>{eta}) {
      PawSetup s = setup();
      s.N = n;
      s.eta = e;
      if (epsilon <= 0.0 || sweep == "eta") s.epsilon = e;
      s.validate(model);
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plane-wave PAW and VPAW solvers for a periodic 1-D Dirac-comb Hamiltonian",
               "paw1d"};
  app.set_config("--config", "", "INI file with key = value lines (keys are option names)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::vector<std::string> methods{"paw_trunc"};
  std::string rho = "bump", chi = "bump";
  app.add_option("--a", cfg.model.a, "second site position in (0,1)")->capture_default_str();
  app.add_option("--Z0", cfg.model.Z0, "potential strength at 0")->capture_default_str();
  app.add_option("--Za", cfg.model.Za, "potential strength at a")->capture_default_str();
  app.add_option("--method", methods,
                 "direct, paw_trunc, paw_pseudo, paw_pseudo_odd or vpaw; sweeps accept a "
                 "comma-separated list")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--eta", cfg.eta, "cut-off radius")->capture_default_str();
  app.add_option("--N", cfg.N, "PAW functions per site")->capture_default_str();
  app.add_option("--d", cfg.d, "matching order of the pseudo waves")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "pseudopotential radius (default: eta)");
  app.add_option("--rho-shape", rho, "projector cut-off shape: bump or narrow")->capture_default_str();
  app.add_option("--chi-shape", chi, "pseudopotential shape: bump or narrow")->capture_default_str();
  app.add_option("--nodes", cfg.nodes, "Gauss-Legendre nodes per panel")->capture_default_str();
  app.add_option("--M", cfg.M, "plane waves n = -M..M")->capture_default_str();
  app.add_option("--sweep", cfg.sweep, "sweep variable: eta or M")->capture_default_str();
  app.add_option("--eta-grid", cfg.eta_grid, "comma-separated eta values")->delimiter(',');
  app.add_option("--M-grid", cfg.M_grid, "comma-separated M values")->delimiter(',');
  app.add_option("--N-grid", cfg.N_grid, "comma-separated N values")->delimiter(',');
  app.add_option("--origin", cfg.origin, "translate both sites by this amount");
  app.add_option("--positive", cfg.positive, "positive eigenvalues to list")->capture_default_str();
  app.add_option("--output", cfg.output, "CSV output file");
  app.add_option("--plot", cfg.plot, "gnuplot script output file");
  app.add_option("--dump", cfg.dump, "matrix dump file (solve)");
  app.add_option("--dump-format", cfg.dump_format, "text or binary")->capture_default_str();
  app.add_option("--vector", cfg.vector_output, "eigenvector coefficient file (solve)");
  app.add_flag("--timing", cfg.timing, "record wall time per sweep point");
  app.add_option("--eig-tolerance", cfg.eig.tolerance, "iterative solver relative residual")
      ->capture_default_str();
  app.add_option("--eig-max-iterations", cfg.eig.max_iterations, "iterative solver iteration cap")
      ->capture_default_str();
  app.add_option("--dense-limit", cfg.eig.dense_limit, "largest dimension solved densely")
      ->capture_default_str();

  auto* exact = app.add_subcommand("exact", "exact spectrum of the model");
  auto* solve = app.add_subcommand("solve", "one Galerkin solve");
  auto* sweep = app.add_subcommand("sweep", "eta or M convergence sweep to CSV");
  for (auto* sub : {exact, solve, sweep}) sub->fallthrough();

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    cfg.methods.clear();
    for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
    cfg.rho_shape = parse_shape(rho);
    cfg.chi_shape = parse_shape(chi);
    if (solve->parsed() && cfg.methods.size() != 1)
      throw ValidationError("solve takes exactly one method");
    if (exact->parsed()) {
      cfg.model.validate();
      if (cfg.positive < 0) throw ValidationError("positive must be >= 0");
      return cmd_exact(cfg, out);
    }
    cfg.validate();
    if (solve->parsed()) return cmd_solve(cfg, out);
    return cmd_sweep(cfg, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitValidation;
  }
}

}  // namespace paw1d
