#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helmholtz/operator.hpp"
#include "helmholtz/spectrum.hpp"

namespace helm {

/// Spatial tiling for the fused cubic smoother. Each tile loads its region widened by
/// `ghost` layers once and applies the three sweeps on regions shrinking by one layer per
/// sweep, recomputing halo values redundantly instead of exchanging them.
struct TilePlan {
  int tile_x = 32;
  int tile_y = 32;
  int ghost = 3;

  static TilePlan full(const StencilOperator& op) { return {op.nx(), op.ny(), 3}; }
  std::string label(const StencilOperator& op) const;
};

/// Same result as poly3_smooth (identical per-point arithmetic). Throws InvalidArgument
/// ("tile too small") when a tile is narrower than 2 * ghost on an axis it does not cover.
Field blocked_poly3(const StencilOperator& op, const Field& u, const Field& b, const SmootherWeights& weights,
                    const TilePlan& plan, Exec exec = Exec::parallel);

/// Static cost model of one fused application under a plan, counted over the actual tiles.
struct PlanCost {
  double flops_per_point = 0.0;      // including redundant halo work
  double bytes_per_point = 0.0;      // iterate read once per tile region, written once
  double intensity() const { return flops_per_point / bytes_per_point; }
};
PlanCost plan_cost(const StencilOperator& op, const TilePlan& plan);
/// Naive triple sweep: each sweep streams the iterate in and out once.
PlanCost naive_cost();

struct BenchRow {
  std::string plan;
  double time_ms = 0.0;  // median
  double mlups = 0.0;    // lattice updates (points x 3 sweeps) per microsecond
  double flops_per_point = 0.0;
  double bytes_per_point = 0.0;
  double intensity = 0.0;
  bool variance_flag = false;  // (max - min) / median > 0.2
  double max_rel_diff = 0.0;   // against the naive path, checked before timing
};

std::vector<BenchRow> bench(const StencilOperator& op, const SmootherWeights& weights,
                            const std::vector<TilePlan>& plans, int repetitions, unsigned seed = 7);

/// Header: plan,time_ms,mlups,flops_per_point,est_bytes_per_point,intensity,variance_flag
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

/// max_k |a_k - b_k| / max(|a_k|, |b_k|), with 0/0 read as 0.
double max_relative_difference(const Field& a, const Field& b);

}  // namespace helm
