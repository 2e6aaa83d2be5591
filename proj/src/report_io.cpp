#include "helmholtz/report_io.hpp"

#include <ostream>

namespace helm {

using nlohmann::json;

namespace {

SolveStatus status_from_string(const std::string& s) {
  for (SolveStatus st : {SolveStatus::converged, SolveStatus::zero_rhs, SolveStatus::max_iter, SolveStatus::stagnation})
    if (to_string(st) == s) return st;
  throw InvalidArgument("report: unknown status '" + s + "'");
}

}  // namespace

json to_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["residual_history"] = r.residual_history;
  j["final_residual"] = r.final_residual;
  j["wall_time"] = r.wall_time;
  json d = json::array();
  for (const CycleDiagnostics& c : r.diagnostics)
    d.push_back({{"cycle", c.cycle},
                 {"pre_residual", c.pre_residual},
                 {"post_residual", c.post_residual},
                 {"cgc_ratio", c.cgc_ratio}});
  j["diagnostics"] = d;
  return j;
}

SolveReport report_from_json(const json& j) {
  SolveReport r;
  r.converged = j.at("converged").get<bool>();
  r.status = status_from_string(j.at("status").get<std::string>());
  r.iterations = j.at("iterations").get<int>();
  r.residual_history = j.at("residual_history").get<std::vector<double>>();
  r.final_residual = j.at("final_residual").get<double>();
  r.wall_time = j.at("wall_time").get<double>();
  for (const json& d : j.at("diagnostics")) {
    CycleDiagnostics c;
    c.cycle = d.at("cycle").get<int>();
    c.pre_residual = d.at("pre_residual").get<std::vector<double>>();
    c.post_residual = d.at("post_residual").get<std::vector<double>>();
    c.cgc_ratio = d.at("cgc_ratio").get<std::vector<double>>();
    r.diagnostics.push_back(std::move(c));
  }
  return r;
}

json to_json(const ProblemConfig& c) {
  json j;
  j["n"] = c.n;
  if (c.k.kind == WavenumberSpec::Kind::constant)
    j["k"] = c.k.k0;
  else
    j["k"] = {{"wedge", c.k.bands}, {"interfaces", c.k.interfaces}};
  j["layer_width"] = c.effective_layer_width();
  j["sigma_max"] = c.sigma_max;
  j["ramp"] = c.ramp == Ramp::quadratic ? "quadratic" : "linear";
  j["beta"] = c.beta;
  j["precond"] = c.precond == PrecondMode::grid ? "grid" : "csl";
  j["smoother"] = c.smoother.type == SmootherKind::Type::poly3 ? std::string("poly3")
                                                                : "gmres" + std::to_string(c.smoother.m);
  j["levels"] = c.levels;
  j["nu_pre"] = c.nu_pre;
  j["nu_post"] = c.nu_post;
  j["tol"] = c.tol;
  j["restart"] = c.restart;
  j["max_iter"] = c.max_iter;
  j["rhs"] = c.rhs == RhsKind::point ? "point" : "random";
  j["seed"] = c.seed;
  return j;
}

void write_residuals_csv(std::ostream& os, const SolveReport& r) {
  os.precision(17);
  os << "iteration,relative_residual\n";
  for (std::size_t i = 0; i < r.residual_history.size(); ++i) os << i << ',' << r.residual_history[i] << '\n';
}

void write_diagnostics_csv(std::ostream& os, const std::vector<CycleDiagnostics>& d) {
  os.precision(17);
  os << "cycle,level,cgc_ratio,pre_residual,post_residual\n";
  for (const CycleDiagnostics& c : d)
    for (std::size_t l = 0; l < c.cgc_ratio.size(); ++l)
      os << c.cycle << ',' << l << ',' << c.cgc_ratio[l] << ',' << c.pre_residual[l] << ',' << c.post_residual[l]
         << '\n';
}

void write_solution_csv(std::ostream& os, const Field& u) {
  os.precision(17);
  os << "i,j,x,y,re,im\n";
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i)
      os << i << ',' << j << ',' << double(i + 1) / (u.nx() + 1) << ',' << double(j + 1) / (u.ny() + 1) << ','
         << u(i, j).real() << ',' << u(i, j).imag() << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os.precision(12);
  os << "k,n,iterations,converged,wall_time\n";
  for (const SweepRow& r : rows)
    os << r.k << ',' << r.n << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.wall_time << '\n';
}

void write_samples_csv(std::ostream& os, const std::vector<LevelSpectrum>& levels) {
  os.precision(17);
  os << "level,mu_re,mu_im,z_re,z_im,hf\n";
  for (const LevelSpectrum& l : levels)
    for (std::size_t k = 0; k < l.samples.points.size(); ++k) {
      const cplx mu = l.samples.points[k];
      const cplx z = l.frame.to_oriented(mu);
      os << l.level << ',' << mu.real() << ',' << mu.imag() << ',' << z.real() << ',' << z.imag() << ','
         << int(l.samples.high_frequency[k]) << '\n';
    }
}

void write_levels_csv(std::ostream& os, const std::vector<LevelSpectrum>& levels) {
  os.precision(17);
  os << "level,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,conjugate,rot_re,rot_im,"
        "w1_re,w1_im,w2_re,w2_im,w3_re,w3_im,stability,smoothing,half_plane\n";
  for (const LevelSpectrum& l : levels) {
    os << l.level;
    for (const cplx& v : l.triangle.v) os << ',' << v.real() << ',' << v.imag();
    os << ',' << (l.frame.conjugate ? 1 : 0) << ',' << l.frame.rotation.real() << ',' << l.frame.rotation.imag();
    for (const cplx& w : l.weights.w) os << ',' << w.real() << ',' << w.imag();
    os << ',' << l.weights.achieved_stability << ',' << l.weights.achieved_smoothing << ','
       << (l.half_plane_bounded ? 1 : 0) << '\n';
  }
}

}  // namespace helm
