#include "helmholtz/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "helmholtz/report_io.hpp"

namespace helm {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw InvalidArgument("config: " + key + ": not a number: '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw InvalidArgument("config: " + key + ": not an integer: '" + v + "'");
  return int(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidArgument("config: " + key + ": expected a boolean, got '" + v + "'");
}

void fail(const std::string& field, const std::string& msg) { throw InvalidArgument("config: " + field + ": " + msg); }

}  // namespace

int ProblemConfig::effective_layer_width() const {
  if (sigma_max == 0.0) return layer_width < 0 ? 0 : layer_width;
  return layer_width < 0 ? default_layer_width(n) : layer_width;
}

WavenumberSpec parse_wavenumber(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("wedge:", 0) == 0) {
    const auto parts = split(t.substr(6), ',');
    if (parts.size() != 3 && parts.size() != 5) fail("k", "wedge needs k1,k2,k3[,y1,y2]");
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(to_double("k", p));
    return parts.size() == 3 ? WavenumberSpec::wedge(v[0], v[1], v[2])
                             : WavenumberSpec::wedge(v[0], v[1], v[2], v[3], v[4]);
  }
  return WavenumberSpec::constant(to_double("k", t));
}

void apply_setting(ProblemConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  if (key == "n")
    c.n = to_int(key, v);
  else if (key == "k")
    c.k = parse_wavenumber(v);
  else if (key == "k-list") {
    c.k_list.clear();
    for (const auto& p : split(v, ',')) c.k_list.push_back(to_double(key, p));
  } else if (key == "ppw")
    c.ppw = to_double(key, v);
  else if (key == "beta")
    c.beta = to_double(key, v);
  else if (key == "sigma-max")
    c.sigma_max = to_double(key, v);
  else if (key == "layer-width")
    c.layer_width = to_int(key, v);
  else if (key == "ramp") {
    if (v == "linear")
      c.ramp = Ramp::linear;
    else if (v == "quadratic")
      c.ramp = Ramp::quadratic;
    else
      fail(key, "expected linear or quadratic");
  } else if (key == "smoother") {
    if (v == "poly3")
      c.smoother = SmootherKind::poly();
    else if (v.rfind("gmres", 0) == 0)
      c.smoother = SmootherKind{SmootherKind::Type::gmres, v.size() > 5 ? to_int(key, v.substr(5)) : 3};
    else
      fail(key, "expected poly3 or gmres3");
  } else if (key == "precond") {
    if (v == "grid")
      c.precond = PrecondMode::grid;
    else if (v == "csl")
      c.precond = PrecondMode::csl;
    else
      fail(key, "expected grid or csl");
  } else if (key == "levels")
    c.levels = to_int(key, v);
  else if (key == "nu-pre")
    c.nu_pre = to_int(key, v);
  else if (key == "nu-post")
    c.nu_post = to_int(key, v);
  else if (key == "tol")
    c.tol = to_double(key, v);
  else if (key == "restart")
    c.restart = to_int(key, v);
  else if (key == "max-iter")
    c.max_iter = to_int(key, v);
  else if (key == "seed")
    c.seed = unsigned(to_int(key, v));
  else if (key == "rhs") {
    if (v == "point")
      c.rhs = RhsKind::point;
    else if (v == "random")
      c.rhs = RhsKind::random;
    else
      fail(key, "expected point or random");
  } else if (key == "out-dir")
    c.out_dir = v;
  else if (key == "diagnostics")
    c.diagnostics = to_bool(key, v);
  else if (key == "solution")
    c.write_solution = to_bool(key, v);
  else if (key == "theta-count")
    c.theta_count = to_int(key, v);
  else if (key == "tiles")
    c.tiles = split(v, ',');
  else if (key == "repetitions")
    c.repetitions = to_int(key, v);
  else
    fail(key, "unknown setting");
}

void load_config_file(ProblemConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config: " + path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
  }
}

namespace {

void validate_impl(const ProblemConfig& c, bool zero_k_ok) {
  if (c.n < 3) fail("n", "must be >= 3");
  if (!(c.beta > 0.0)) fail("shift beta", "must be > 0");
  if (!(c.sigma_max >= 0.0)) fail("sigma-max", "must be >= 0");
  const int lw = c.effective_layer_width();
  if (lw < 0 || 4 * lw > c.n + 1) fail("layer-width", "must lie in [0, (n+1)/4]");
  if (c.k.kind == WavenumberSpec::Kind::constant) {
    if (!(c.k.k0 > 0.0) && !(zero_k_ok && c.k.k0 == 0.0)) fail("k", "must be > 0");
  } else {
    for (double k : c.k.bands)
      if (!(k > 0.0)) fail("k", "wedge wave numbers must be > 0");
    if (!(0.0 < c.k.interfaces[0] && c.k.interfaces[0] < c.k.interfaces[1] && c.k.interfaces[1] < 1.0))
      fail("k", "wedge interfaces must satisfy 0 < y1 < y2 < 1");
  }
  if (c.smoother.type == SmootherKind::Type::gmres && c.smoother.m < 1) fail("smoother", "gmres dimension must be >= 1");
  if (c.levels < 1) fail("levels", "must be >= 1");
  if (c.nu_pre < 0 || c.nu_post < 0) fail("nu-pre/nu-post", "must be >= 0");
  if (!(c.tol > 0.0)) fail("tol", "must be > 0");
  if (c.restart < 1) fail("restart", "must be >= 1");
  if (c.max_iter < 0) fail("max-iter", "must be >= 0");
  if (c.theta_count < 8) fail("theta-count", "must be >= 8");
  if (!(c.ppw > 0.0)) fail("ppw", "must be > 0");
  for (double k : c.k_list)
    if (!(k > 0.0)) fail("k-list", "wave numbers must be > 0");
  if (c.repetitions < 1) fail("repetitions", "must be >= 1");
}

// k = 0 (pure Laplacian) is only meaningful for spectral analysis; solves need k > 0.
Problem build_problem_impl(const ProblemConfig& c, bool zero_k_ok) {
  validate_impl(c, zero_k_ok);
  const ComplexGrid grid = build_stretched_grid(c.n, c.effective_layer_width(), c.sigma_max, c.ramp);
  const bool zero_k = c.k.kind == WavenumberSpec::Kind::constant && c.k.k0 == 0.0;
  WavenumberField k = build_wavenumber_field(zero_k ? WavenumberSpec::constant(1.0) : c.k, grid);
  if (zero_k) std::fill(k.values.begin(), k.values.end(), 0.0);
  StencilOperator physical(grid, k, OperatorMode::physical);
  StencilOperator precond = c.precond == PrecondMode::grid
                                ? StencilOperator(rotate_grid(grid, c.beta), k, OperatorMode::precond_grid)
                                : StencilOperator(grid, k, OperatorMode::precond_csl, c.beta);
  Field rhs(c.n, c.n);
  if (c.rhs == RhsKind::point) {
    const double h = 1.0 / double(c.n + 1);
    rhs(c.n / 2, c.n / 2) = 1.0 / (h * h);
  } else {
    std::mt19937 rng(c.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = cplx(uni(rng), uni(rng));
  }
  return {std::move(physical), std::move(precond), std::move(rhs)};
}

}  // namespace

void validate(const ProblemConfig& c) { validate_impl(c, false); }

Problem build_problem(const ProblemConfig& c) { return build_problem_impl(c, false); }

SolveOutcome solve(const ProblemConfig& c) {
  const Problem p = build_problem(c);
  HierarchyOptions hopt;
  hopt.spectrum.theta_count = c.theta_count;
  const Hierarchy h = build_hierarchy(p.preconditioner, c.smoother, c.levels, hopt);
  VCycle vc(h, c.nu_pre, c.nu_post);

  std::vector<CycleDiagnostics> diags;
  auto apply_a = [&](std::span<const cplx> x, std::span<cplx> y) { p.physical.apply(x, y); };
  auto precondition = [&](std::span<const cplx> r, std::span<cplx> z) {
    if (c.diagnostics) {
      CycleDiagnostics d;
      d.cycle = int(diags.size());
      vc.precondition(r, z, &d);
      diags.push_back(std::move(d));
    } else {
      vc.precondition(r, z);
    }
  };
  KrylovResult kr = fgmres(apply_a, precondition, p.rhs.values(), {c.tol, c.restart, c.max_iter});
  kr.report.diagnostics = std::move(diags);
  return {std::move(kr.report), std::move(kr.x), h.depth()};
}

SolveOutcome run_solve(const ProblemConfig& c) {
  SolveOutcome out = solve(c);
  std::filesystem::create_directories(c.out_dir);
  {
    nlohmann::json j = to_json(out.report);
    j["config"] = to_json(c);
    j["levels"] = out.levels;
    std::ofstream(c.out_dir / "report.json") << j.dump(2) << '\n';
  }
  {
    std::ofstream os(c.out_dir / "residuals.csv");
    write_residuals_csv(os, out.report);
  }
  if (c.diagnostics) {
    std::ofstream os(c.out_dir / "diagnostics.csv");
    write_diagnostics_csv(os, out.report.diagnostics);
  }
  if (c.write_solution) {
    Field u(c.n, c.n);
    std::copy(out.solution.begin(), out.solution.end(), u.values().begin());
    std::ofstream os(c.out_dir / "solution.csv");
    write_solution_csv(os, u);
  }
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("fit_line: need matching non-empty samples");
  const double n = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

int n_for_wavenumber(double k, double ppw) {
  const double target = 2.0 * std::numbers::pi / ppw;
  const int lo = std::max(4, int(std::ceil(k / (1.05 * target))));
  const int hi = int(std::floor(k / (0.95 * target)));
  int best = -1, best_pow = -1;
  double best_dev = 1e300;
  for (int m = lo; m <= hi; ++m) {  // m = n + 1 intervals
    int pow2 = 0;
    for (int t = m; t % 2 == 0; t /= 2) ++pow2;
    const double dev = std::abs(k / m - target);
    if (pow2 > best_pow || (pow2 == best_pow && dev < best_dev)) {
      best = m;
      best_pow = pow2;
      best_dev = dev;
    }
  }
  if (best < 0) throw InvalidArgument("sweep: no grid keeps k h within 5% of 2 pi / ppw for k = " + std::to_string(k));
  return best - 1;
}

SweepResult run_sweep(const ProblemConfig& c) {
  validate(c);
  if (c.k_list.empty()) fail("k-list", "must not be empty");
  std::vector<double> ks = c.k_list;
  std::sort(ks.begin(), ks.end());
  SweepResult res;
  res.rows.resize(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    ProblemConfig ci = c;
    ci.k = WavenumberSpec::constant(ks[i]);
    ci.n = n_for_wavenumber(ks[i], c.ppw);
    ci.diagnostics = false;
    const SolveOutcome o = solve(ci);
    res.rows[i] = {ks[i], ci.n, o.report.iterations, o.report.converged, o.report.wall_time};
  }
  std::vector<double> x, y;
  for (const SweepRow& r : res.rows) {
    x.push_back(r.k);
    y.push_back(double(r.iterations));
  }
  res.fit = fit_line(x, y);

  std::filesystem::create_directories(c.out_dir);
  {
    std::ofstream os(c.out_dir / "sweep.csv");
    write_sweep_csv(os, res.rows);
  }
  {
    std::ofstream os(c.out_dir / "sweep_fit.csv");
    os.precision(12);
    os << "slope,intercept,r2\n" << res.fit.slope << ',' << res.fit.intercept << ',' << res.fit.r2 << '\n';
  }
  return res;
}

SpectrumReport run_spectrum(const ProblemConfig& c) {
  const Problem p = build_problem_impl(c, true);
  HierarchyOptions hopt;
  hopt.spectrum.theta_count = c.theta_count;
  hopt.design_weights = true;
  hopt.keep_samples = true;
  Hierarchy h = build_hierarchy(p.preconditioner, SmootherKind::poly(), c.levels, hopt);
  SpectrumReport rep;
  for (Level& l : h.levels)
    if (l.spectrum) rep.levels.push_back(std::move(*l.spectrum));
  std::filesystem::create_directories(c.out_dir);
  {
    std::ofstream os(c.out_dir / "spectrum_samples.csv");
    write_samples_csv(os, rep.levels);
  }
  {
    std::ofstream os(c.out_dir / "spectrum_levels.csv");
    write_levels_csv(os, rep.levels);
  }
  return rep;
}

std::vector<TilePlan> parse_plans(const std::vector<std::string>& tiles, const StencilOperator& op) {
  if (tiles.empty()) throw InvalidArgument("bench: empty plan list");
  std::vector<TilePlan> plans;
  for (const std::string& t : tiles) {
    if (t == "full") {
      plans.push_back(TilePlan::full(op));
      continue;
    }
    const auto x = t.find('x');
    if (x == std::string::npos) {
      const int s = to_int("tiles", t);
      plans.push_back({s, s, 3});
    } else {
      plans.push_back({to_int("tiles", t.substr(0, x)), to_int("tiles", t.substr(x + 1)), 3});
    }
  }
  return plans;
}

std::vector<BenchRow> run_bench(const ProblemConfig& c) {
  const Problem p = build_problem(c);
  const std::vector<TilePlan> plans = parse_plans(c.tiles, p.preconditioner);
  SpectrumOptions sopt;
  sopt.theta_count = c.theta_count;
  const LevelSpectrum ls = analyze_level(p.preconditioner, 0, sopt);
  std::vector<BenchRow> rows = bench(p.preconditioner, ls.weights, plans, c.repetitions, c.seed);
  std::filesystem::create_directories(c.out_dir);
  std::ofstream os(c.out_dir / "bench.csv");
  write_bench_csv(os, rows);
  return rows;
}

}  // namespace helm
