#pragma once

#include <iosfwd>
#include <json.hpp>

#include "helmholtz/krylov.hpp"
#include "helmholtz/problem.hpp"

namespace helm {

nlohmann::json to_json(const SolveReport& r);
SolveReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProblemConfig& c);

/// iteration,relative_residual
void write_residuals_csv(std::ostream& os, const SolveReport& r);
/// cycle,level,cgc_ratio,pre_residual,post_residual
void write_diagnostics_csv(std::ostream& os, const std::vector<CycleDiagnostics>& d);
/// i,j,x,y,re,im
void write_solution_csv(std::ostream& os, const Field& u);
/// k,n,iterations,converged,wall_time
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
/// level,mu_re,mu_im,z_re,z_im,hf
void write_samples_csv(std::ostream& os, const std::vector<LevelSpectrum>& levels);
/// level,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,conjugate,rot_re,rot_im,
/// w1_re,w1_im,w2_re,w2_im,w3_re,w3_im,stability,smoothing,half_plane
void write_levels_csv(std::ostream& os, const std::vector<LevelSpectrum>& levels);

}  // namespace helm
