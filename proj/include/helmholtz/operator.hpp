#pragma once

#include <vector>

#include "helmholtz/field.hpp"
#include "helmholtz/grid.hpp"
#include "helmholtz/kernels.hpp"

namespace helm {

enum class OperatorMode { physical, precond_grid, precond_csl };

/// Matrix-free discrete Helmholtz operator -D2x - D2y - s k^2 on a complex grid.
///
/// D2 is the three-point second difference on non-uniform complex spacings,
///   (D2 u)_j = 2/(h_{j-1}+h_j) [(u_{j+1}-u_j)/h_j - (u_j-u_{j-1})/h_{j-1}],
/// with homogeneous Dirichlet values eliminated. s = 1 except in precond_csl mode,
/// where s = 1 + i csl_beta. Immutable after construction.
class StencilOperator {
 public:
  StencilOperator(ComplexGrid grid, WavenumberField k, OperatorMode mode, double csl_beta = 0.0);

  int nx() const { return grid_.n_x; }
  int ny() const { return grid_.n_y; }
  std::size_t size() const { return std::size_t(nx()) * ny(); }
  const ComplexGrid& grid() const { return grid_; }
  const WavenumberField& k_field() const { return k_; }
  OperatorMode mode() const { return mode_; }
  double csl_beta() const { return csl_beta_; }
  cplx shift() const { return shift_; }
  const Stencil& stencil() const { return stencil_; }

  void apply(std::span<const cplx> u, std::span<cplx> v, Exec exec = Exec::parallel) const;
  Field apply(const Field& u) const;
  Field diagonal() const;
  Field residual(const Field& b, const Field& u) const;
  void residual(std::span<const cplx> b, std::span<const cplx> u, std::span<cplx> r) const;

  Field make_field(cplx value = {}) const { return Field(nx(), ny(), value); }

 private:
  ComplexGrid grid_;
  WavenumberField k_;
  OperatorMode mode_;
  double csl_beta_;
  cplx shift_;
  Stencil stencil_;
};

/// Row-major dense matrix used for small-instance oracles and the coarsest solve.
struct DenseMatrix {
  int n = 0;
  std::vector<cplx> a;
  cplx& operator()(int r, int c) { return a[std::size_t(r) * n + c]; }
  const cplx& operator()(int r, int c) const { return a[std::size_t(r) * n + c]; }
};

inline constexpr int kDenseCap = 4096;

/// Dense matrix of the operator in lexicographic order (x fastest), entries taken
/// directly from the difference formula. Rejects more than 4096 unknowns.
DenseMatrix assemble_dense(const StencilOperator& op);

}  // namespace helm
