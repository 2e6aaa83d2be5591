#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "helmholtz/blocked.hpp"
#include "helmholtz/grid.hpp"
#include "helmholtz/krylov.hpp"
#include "helmholtz/multigrid.hpp"
#include "helmholtz/operator.hpp"

namespace helm {

enum class PrecondMode { grid, csl };
enum class RhsKind { point, random };

struct ProblemConfig {
  int n = 63;
  WavenumberSpec k = WavenumberSpec::constant(20.0);
  int layer_width = -1;  // -1: default (n/8, min 4, at most n/4) when sigma_max > 0
  double sigma_max = 1.25;
  Ramp ramp = Ramp::quadratic;
  double beta = 0.5;
  PrecondMode precond = PrecondMode::grid;
  SmootherKind smoother = SmootherKind::gmres(3);
  int levels = 32;
  int nu_pre = 1;
  int nu_post = 1;
  double tol = 1e-6;
  int restart = 20;
  int max_iter = 500;
  RhsKind rhs = RhsKind::point;
  unsigned seed = 1;
  std::filesystem::path out_dir = ".";
  bool diagnostics = false;
  bool write_solution = false;
  int theta_count = 64;
  // sweep
  std::vector<double> k_list{10.0, 20.0, 40.0, 80.0};
  double ppw = 10.0;
  // bench
  std::vector<std::string> tiles{"8", "16", "32", "64", "full"};
  int repetitions = 5;

  int effective_layer_width() const;
};

/// Field-level checks of every module precondition; throws InvalidArgument naming the field.
void validate(const ProblemConfig& c);

/// Apply "key = value" settings (keys are the long flag names without dashes).
void apply_setting(ProblemConfig& c, const std::string& key, const std::string& value);
/// Read a plain key-value config file; '#' starts a comment.
void load_config_file(ProblemConfig& c, const std::filesystem::path& path);

WavenumberSpec parse_wavenumber(const std::string& text);

/// Physical operator, preconditioner operator and right-hand side of a model problem.
struct Problem {
  StencilOperator physical;
  StencilOperator preconditioner;
  Field rhs;
};

Problem build_problem(const ProblemConfig& c);

struct SolveOutcome {
  SolveReport report;
  std::vector<cplx> solution;
  int levels = 0;
};

/// Solve without writing files.
SolveOutcome solve(const ProblemConfig& c);

/// Solve and write report.json, residuals.csv and, when enabled, diagnostics.csv and
/// solution.csv into c.out_dir.
SolveOutcome run_solve(const ProblemConfig& c);

struct SweepRow {
  double k = 0.0;
  int n = 0;
  int iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Grid size with k h closest to 2 pi / ppw; errors if no n keeps k h within 5%.
int n_for_wavenumber(double k, double ppw);

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by k
  LinearFit fit;               // iterations vs k
};

/// Writes sweep.csv (k,n,iterations,converged,wall_time) and sweep_fit.csv (slope,intercept,r2).
SweepResult run_sweep(const ProblemConfig& c);

struct SpectrumReport {
  std::vector<LevelSpectrum> levels;
};

/// Writes spectrum_samples.csv and spectrum_levels.csv for every smoothed level. Unlike the
/// solvers it accepts a constant k = 0 (the pure Laplacian).
SpectrumReport run_spectrum(const ProblemConfig& c);

std::vector<TilePlan> parse_plans(const std::vector<std::string>& tiles, const StencilOperator& op);

/// Writes bench.csv for the fine preconditioner level with its designed weights.
std::vector<BenchRow> run_bench(const ProblemConfig& c);

}  // namespace helm
