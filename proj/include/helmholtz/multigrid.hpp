#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "helmholtz/operator.hpp"
#include "helmholtz/smoother.hpp"
#include "helmholtz/spectrum.hpp"

namespace helm {

/// Full weighting onto the coarse-coincident nodes (fine index 2I+1): 1/4 center,
/// 1/8 edge neighbours, 1/16 corners; zero outside the interior.
Field restrict_full_weighting(const Field& fine);
/// Bilinear interpolation; fine size is 2 n_c + 1 per axis.
Field prolong_bilinear(const Field& coarse);

/// LU factors of a dense matrix (partial pivoting).
class DenseLU {
 public:
  explicit DenseLU(const DenseMatrix& m);
  ~DenseLU();
  DenseLU(DenseLU&&) noexcept;
  DenseLU& operator=(DenseLU&&) noexcept;

  int size() const { return n_; }
  std::vector<cplx> solve(std::span<const cplx> rhs) const;

 private:
  struct Impl;
  int n_ = 0;
  std::unique_ptr<Impl> impl_;
};

std::vector<cplx> coarse_solve(const DenseLU& factors, std::span<const cplx> rhs);

struct Level {
  StencilOperator op;
  std::optional<SmootherWeights> weights;
  std::optional<LevelSpectrum> spectrum;  // samples dropped after design
};

struct HierarchyOptions {
  int coarsest_max = 9;  // points per axis
  bool design_weights = false;  // compute poly3 weights even for the gmres smoother
  bool keep_samples = false;
  SpectrumOptions spectrum{};
};

struct Hierarchy {
  std::vector<Level> levels;
  std::unique_ptr<DenseLU> coarsest;
  SmootherKind smoother;

  int depth() const { return int(levels.size()); }
};

/// Rediscretize the fine operator on successively coarsened complex grids (k by injection)
/// until the grid has at most `coarsest_max` points per axis or `max_levels` is reached,
/// design poly3 weights per level, and factor the coarsest operator.
Hierarchy build_hierarchy(const StencilOperator& fine, SmootherKind smoother, int max_levels = 32,
                          const HierarchyOptions& opt = {});

struct CycleDiagnostics {
  int cycle = 0;
  // One entry per non-coarsest level, finest first.
  std::vector<double> pre_residual;   // ||r|| before pre-smoothing
  std::vector<double> post_residual;  // ||r|| after post-smoothing
  std::vector<double> cgc_ratio;      // ||r after cgc|| / ||r before cgc||
};

/// V-cycle state for one hierarchy; not shareable between threads.
class VCycle {
 public:
  explicit VCycle(const Hierarchy& h, int nu_pre = 1, int nu_post = 1);

  /// One V-cycle on level 0 starting from u (updated in place).
  void run(const Field& b, Field& u, CycleDiagnostics* diag = nullptr);
  /// One V-cycle from a zero initial guess, as used by the outer Krylov method.
  void precondition(std::span<const cplx> r, std::span<cplx> z, CycleDiagnostics* diag = nullptr);

  const Hierarchy& hierarchy() const { return h_; }

 private:
  void cycle(std::size_t level, CycleDiagnostics* diag);
  void smooth(std::size_t level, int count);

  const Hierarchy& h_;
  int nu_pre_, nu_post_;
  std::vector<Field> b_, u_, r_, scratch_;
};

}  // namespace helm
