// helmholtz: solve / sweep / spectrum / bench entry points for the 2D model problems.

#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "helmholtz/problem.hpp"

namespace {

// Flags registered as plain strings and forwarded to apply_setting, so the config file
// and the command line share one parser. Flags win over the file.
struct Overrides {
  std::map<std::string, std::string> values;
  std::string config_file;

  void add(CLI::App* app, const std::string& name, const std::string& help) {
    app->add_option("--" + name, values[name], help);
  }
  helm::ProblemConfig resolve() const {
    helm::ProblemConfig c;
    if (!config_file.empty()) helm::load_config_file(c, config_file);
    for (const auto& [k, v] : values)
      if (!v.empty()) helm::apply_setting(c, k, v);
    return c;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_file, "key = value config file");
  o.add(app, "n", "interior points per axis");
  o.add(app, "k", "wave number, or wedge:k1,k2,k3[,y1,y2]");
  o.add(app, "beta", "complex shift beta");
  o.add(app, "sigma-max", "maximum stretch in the absorbing layers");
  o.add(app, "layer-width", "absorbing layer width in cells");
  o.add(app, "ramp", "linear | quadratic");
  o.add(app, "smoother", "poly3 | gmres3");
  o.add(app, "precond", "grid | csl");
  o.add(app, "levels", "maximum multigrid levels");
  o.add(app, "nu-pre", "pre-smoothing steps");
  o.add(app, "nu-post", "post-smoothing steps");
  o.add(app, "tol", "relative residual tolerance");
  o.add(app, "restart", "FGMRES restart length");
  o.add(app, "max-iter", "maximum outer iterations");
  o.add(app, "rhs", "point | random");
  o.add(app, "seed", "seed for random right-hand sides");
  o.add(app, "out-dir", "output directory");
  o.add(app, "diagnostics", "record coarse-grid-correction diagnostics (0/1)");
  o.add(app, "solution", "write solution.csv (0/1)");
  o.add(app, "theta-count", "symbol samples per axis");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz solver: complex-shifted multigrid preconditioned FGMRES"};
  app.require_subcommand(1);

  Overrides solve_o, sweep_o, spectrum_o, bench_o;
  auto* solve = app.add_subcommand("solve", "solve one model problem");
  add_common(solve, solve_o);
  auto* sweep = app.add_subcommand("sweep", "iteration counts over a list of wave numbers");
  add_common(sweep, sweep_o);
  sweep_o.add(sweep, "k-list", "comma separated wave numbers");
  sweep_o.add(sweep, "ppw", "points per wavelength");
  auto* spectrum = app.add_subcommand("spectrum", "symbol samples, triangles and smoother weights per level");
  add_common(spectrum, spectrum_o);
  auto* bench = app.add_subcommand("bench", "blocked cubic smoother throughput");
  add_common(bench, bench_o);
  bench_o.add(bench, "tiles", "comma separated tile sizes (8, 16x32, full)");
  bench_o.add(bench, "repetitions", "timed repetitions per plan");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      const helm::ProblemConfig c = solve_o.resolve();
      const helm::SolveOutcome o = helm::run_solve(c);
      std::cout << helm::to_string(o.report.status) << " after " << o.report.iterations
                << " iterations, relative residual " << o.report.final_residual << '\n';
      return o.report.converged ? 0 : 2;
    }
    if (sweep->parsed()) {
      const helm::SweepResult r = helm::run_sweep(sweep_o.resolve());
      for (const auto& row : r.rows)
        std::cout << "k=" << row.k << " n=" << row.n << " iterations=" << row.iterations
                  << (row.converged ? "" : " (not converged)") << '\n';
      std::cout << "slope=" << r.fit.slope << " r2=" << r.fit.r2 << '\n';
      bool all = true;
      for (const auto& row : r.rows) all = all && row.converged;
      return all ? 0 : 2;
    }
    if (spectrum->parsed()) {
      const helm::SpectrumReport r = helm::run_spectrum(spectrum_o.resolve());
      for (const auto& l : r.levels)
        std::cout << "level " << l.level << ": stability " << l.weights.achieved_stability << ", smoothing "
                  << l.weights.achieved_smoothing << (l.diagnostic.empty() ? "" : " [" + l.diagnostic + "]") << '\n';
      return 0;
    }
    if (bench->parsed()) {
      const auto rows = helm::run_bench(bench_o.resolve());
      for (const auto& r : rows)
        std::cout << r.plan << ": " << r.time_ms << " ms, " << r.mlups << " MLUP/s, max rel diff " << r.max_rel_diff
                  << (r.variance_flag ? " (noisy)" : "") << '\n';
      return 0;
    }
  } catch (const helm::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
