#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helmholtz/report_io.hpp"

using namespace helm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("helmholtz_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run cli(const std::string& args, const fs::path& dir) {
  const char* exe = std::getenv("HELMHOLTZ_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "HELMHOLTZ_CLI is not set");
  const std::string cmd = std::string("\"") + exe + "\" " + args + " > \"" + (dir / "stdout.txt").string() +
                          "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "stdout.txt");
  r.err = slurp(dir / "stderr.txt");
  return r;
}

}  // namespace

TEST_CASE("solve writes its reports and converges") {
  const fs::path dir = scratch("solve");
  const Run r = cli("solve --n 63 --k 20 --diagnostics 1 --solution 1 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code == 0);
  CHECK(r.out.find("converged") != std::string::npos);
  for (const char* f : {"report.json", "residuals.csv", "diagnostics.csv", "solution.csv"}) CHECK(fs::exists(dir / f));

  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
  const SolveReport rep = report_from_json(j);
  CHECK(rep.converged);
  CHECK(rep.residual_history.front() == 1.0);
  CHECK(rep.residual_history.back() <= 1e-6);

  const auto res = lines(dir / "residuals.csv");
  CHECK(res.front() == "iteration,relative_residual");
  CHECK(res.size() == rep.residual_history.size() + 1);
  CHECK(lines(dir / "diagnostics.csv").front() == "cycle,level,cgc_ratio,pre_residual,post_residual");
  const auto sol = lines(dir / "solution.csv");
  CHECK(sol.front() == "i,j,x,y,re,im");
  CHECK(sol.size() == 63u * 63u + 1);
}

TEST_CASE("solve is deterministic") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "solve --n 31 --k 10 --rhs random --seed 4 --smoother poly3 --out-dir ";
  CHECK(cli(args + "\"" + a.string() + "\"", a).code == 0);
  CHECK(cli(args + "\"" + b.string() + "\"", b).code == 0);
  CHECK(slurp(a / "residuals.csv") == slurp(b / "residuals.csv"));
}

TEST_CASE("invalid settings are rejected with field-level messages") {
  const fs::path dir = scratch("invalid");
  const Run beta = cli("solve --n 15 --k 5 --beta -1 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(beta.code == 1);
  CHECK(beta.err.find("shift beta") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "report.json"));

  const Run lw = cli("solve --n 15 --layer-width 5 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(lw.code == 1);
  CHECK(lw.err.find("layer-width") != std::string::npos);

  const Run sm = cli("solve --smoother jacobi --out-dir \"" + dir.string() + "\"", dir);
  CHECK(sm.code == 1);
  CHECK(sm.err.find("smoother") != std::string::npos);

  CHECK(cli("frobnicate", dir).code != 0);
}

TEST_CASE("solve reports non-convergence through the exit code") {
  const fs::path dir = scratch("maxiter");
  const Run r = cli("solve --n 31 --k 10 --max-iter 2 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(fs::exists(dir / "report.json"));
  CHECK_FALSE(report_from_json(nlohmann::json::parse(slurp(dir / "report.json"))).converged);
}

TEST_CASE("config file with flag overrides") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "case.cfg");
    cfg << "# model problem\nn = 15\nk = 5\nsmoother = poly3\ntol = 1e-3\n";
  }
  const Run r = cli("solve --config \"" + (dir / "case.cfg").string() + "\" --tol 1e-8 --out-dir \"" + dir.string() + "\"",
                    dir);
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j.at("config").at("n") == 15);
  CHECK(j.at("config").at("tol").get<double>() == 1e-8);
  CHECK(report_from_json(j).residual_history.back() <= 1e-8);
}

TEST_CASE("single-k sweep equals the solve iteration count") {
  const fs::path dir = scratch("sweep");
  const Run r = cli("sweep --k-list 10 --ppw 10 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code == 0);
  const auto rows = lines(dir / "sweep.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "k,n,iterations,converged,wall_time");
  const auto f = split(rows[1]);
  CHECK(f[1] == "15");

  ProblemConfig c;
  c.n = 15;
  c.k = WavenumberSpec::constant(10.0);
  CHECK(std::stoi(f[2]) == solve(c).report.iterations);
  CHECK(lines(dir / "sweep_fit.csv").front() == "slope,intercept,r2");
}

TEST_CASE("spectrum of the pure Laplacian is a real segment") {
  const fs::path dir = scratch("spectrum0");
  const Run r = cli("spectrum --n 15 --k 0 --sigma-max 0 --theta-count 16 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code == 0);
  const auto rows = lines(dir / "spectrum_samples.csv");
  CHECK(rows.front() == "level,mu_re,mu_im,z_re,z_im,hf");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    CHECK(std::stod(f[2]) == 0.0);
    CHECK(std::stod(f[1]) >= 0.0);
    CHECK(std::stod(f[1]) <= 2.0);
  }
}

TEST_CASE("spectrum vertices lie in the lower half-plane and rows match") {
  const fs::path dir = scratch("spectrum");
  const Run r = cli("spectrum --n 31 --k 20 --beta 0.5 --theta-count 16 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code == 0);
  const auto levels = lines(dir / "spectrum_levels.csv");
  REQUIRE(levels.size() == 3);  // header, 31 and 15; 7 is solved directly
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const auto f = split(levels[i]);
    for (int v : {2, 4, 6}) CHECK(std::stod(f[std::size_t(v)]) <= 1e-12);
    CHECK(std::stod(f[16]) <= 1.0 + 1e-8);
  }

  // Sample rows per level match the library's sample sets.
  ProblemConfig c;
  c.n = 31;
  c.k = WavenumberSpec::constant(20.0);
  c.theta_count = 16;
  c.out_dir = scratch("spectrum_lib");
  const SpectrumReport rep = run_spectrum(c);
  const auto samples = lines(dir / "spectrum_samples.csv");
  REQUIRE(samples.size() > 1);
  std::map<int, std::size_t> per_level;
  for (std::size_t i = 1; i < samples.size(); ++i) ++per_level[std::stoi(split(samples[i])[0])];
  REQUIRE(per_level.size() == rep.levels.size());
  for (const LevelSpectrum& l : rep.levels) CHECK(per_level[l.level] == l.samples.points.size());
}

TEST_CASE("bench emits one row per plan") {
  const fs::path dir = scratch("bench");
  const Run r = cli("bench --n 63 --k 20 --tiles 16,full --repetitions 1 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code == 0);
  const auto rows = lines(dir / "bench.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "plan,time_ms,mlups,flops_per_point,est_bytes_per_point,intensity,variance_flag");
  CHECK(split(rows[1])[0] == "16x16");
  CHECK(split(rows[2])[0] == "full");
  CHECK(std::stod(split(rows[2])[3]) == doctest::Approx(162.0));

  ProblemConfig c;
  c.n = 15;
  const Problem p = build_problem(c);
  CHECK_THROWS_AS(parse_plans({}, p.preconditioner), InvalidArgument);
}

TEST_CASE("report JSON round trip") {
  SolveReport r;
  r.converged = true;
  r.status = SolveStatus::converged;
  r.iterations = 2;
  r.residual_history = {1.0, 0.1, 1e-7};
  r.final_residual = 1.1e-7;
  r.wall_time = 0.25;
  CycleDiagnostics d;
  d.cycle = 0;
  d.pre_residual = {1.0, 0.5};
  d.post_residual = {0.2, 0.1};
  d.cgc_ratio = {0.3, 1.7};
  r.diagnostics = {d};
  const SolveReport back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(back.converged == r.converged);
  CHECK(back.status == r.status);
  CHECK(back.iterations == r.iterations);
  CHECK(back.residual_history == r.residual_history);
  CHECK(back.final_residual == r.final_residual);
  REQUIRE(back.diagnostics.size() == 1);
  CHECK(back.diagnostics[0].cgc_ratio == d.cgc_ratio);
}

TEST_CASE("settings parser") {
  ProblemConfig c;
  apply_setting(c, "k", "wedge:10,20,40");
  CHECK(c.k.kind == WavenumberSpec::Kind::wedge);
  apply_setting(c, "k-list", "10, 20,40");
  CHECK(c.k_list == std::vector<double>{10.0, 20.0, 40.0});
  apply_setting(c, "smoother", "poly3");
  CHECK(c.smoother.type == SmootherKind::Type::poly3);
  apply_setting(c, "precond", "csl");
  CHECK(c.precond == PrecondMode::csl);
  CHECK_THROWS_WITH_AS(apply_setting(c, "n", "abc"), doctest::Contains("n"), InvalidArgument);
  CHECK_THROWS_WITH_AS(apply_setting(c, "colour", "red"), doctest::Contains("unknown setting"), InvalidArgument);
  CHECK_THROWS_AS(apply_setting(c, "k", "wedge:1,2"), InvalidArgument);

  ProblemConfig d;
  d.tol = 0.0;
  CHECK_THROWS_WITH_AS(validate(d), doctest::Contains("tol"), InvalidArgument);
  ProblemConfig e;
  e.k = WavenumberSpec::constant(0.0);
  CHECK_THROWS_WITH_AS(validate(e), doctest::Contains("k"), InvalidArgument);
}

TEST_CASE("sweep grid sizes keep kh near the target") {
  const double target = 2.0 * std::numbers::pi / 10.0;
  const int expected[] = {15, 31, 63, 127};
  int i = 0;
  for (double k : {10.0, 20.0, 40.0, 80.0}) {
    const int n = n_for_wavenumber(k, 10.0);
    CHECK(n == expected[i++]);
    CHECK(std::abs(k / (n + 1) - target) <= 0.05 * target);
  }
  CHECK_THROWS_AS(n_for_wavenumber(1.0, 10.0), InvalidArgument);
}

TEST_CASE("least-squares line") {
  const LinearFit exact = fit_line({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
  CHECK(exact.slope == doctest::Approx(2.0));
  CHECK(exact.intercept == doctest::Approx(1.0));
  CHECK(exact.r2 == doctest::Approx(1.0));
  // Independent closed form: r2 is the squared correlation.
  const std::vector<double> x{10, 20, 40, 80}, y{9, 18, 32, 40};
  const LinearFit f = fit_line(x, y);
  double mx = 0, my = 0;
  for (int k = 0; k < 4; ++k) mx += x[std::size_t(k)] / 4, my += y[std::size_t(k)] / 4;
  double sxy = 0, sxx = 0, syy = 0;
  for (int k = 0; k < 4; ++k) {
    sxy += (x[std::size_t(k)] - mx) * (y[std::size_t(k)] - my);
    sxx += (x[std::size_t(k)] - mx) * (x[std::size_t(k)] - mx);
    syy += (y[std::size_t(k)] - my) * (y[std::size_t(k)] - my);
  }
  CHECK(f.r2 == doctest::Approx(sxy * sxy / (sxx * syy)));
  CHECK_THROWS_AS(fit_line({}, {}), InvalidArgument);
}
