#pragma once

#include <functional>
#include <string>
#include <vector>

#include "helmholtz/field.hpp"
#include "helmholtz/multigrid.hpp"

namespace helm {

using LinearMap = std::function<void(std::span<const cplx>, std::span<cplx>)>;

enum class SolveStatus { converged, zero_rhs, max_iter, stagnation };
std::string to_string(SolveStatus s);

struct SolveReport {
  bool converged = false;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  std::vector<double> residual_history;  // ||r_j|| / ||b||, entry 0 is 1
  double final_residual = 0.0;           // explicit ||b - A x|| / ||b||
  double wall_time = 0.0;                // seconds
  std::vector<CycleDiagnostics> diagnostics;
};

struct KrylovOptions {
  double tol = 1e-6;
  int restart = 20;
  int max_iter = 500;
};

struct KrylovResult {
  std::vector<cplx> x;
  SolveReport report;
};

/// Flexible GMRES with right preconditioning and zero initial guess. The preconditioner may
/// change between iterations; the preconditioned directions are stored alongside the basis.
KrylovResult fgmres(const LinearMap& apply_a, const LinearMap& precondition, std::span<const cplx> b,
                    const KrylovOptions& opt = {});

/// Restarted GMRES, optionally right-preconditioned by a fixed linear map.
KrylovResult gmres_baseline(const LinearMap& apply_a, std::span<const cplx> b, const KrylovOptions& opt = {},
                            const LinearMap& right_precondition = {});

}  // namespace helm
