#include "helmholtz/operator.hpp"

#include <cmath>
#include <string>

namespace helm {

namespace {

// Coefficients of -D2 at interior node i: (west, east, center contribution).
struct AxisCoeffs {
  std::vector<cplx> west, east, center;
};

AxisCoeffs axis_coeffs(const std::vector<cplx>& spacing) {
  const std::size_t n = spacing.size() - 1;
  AxisCoeffs c;
  c.west.resize(n);
  c.east.resize(n);
  c.center.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx hl = spacing[i];
    const cplx hr = spacing[i + 1];
    const cplx east = 2.0 / ((hl + hr) * hr);
    const cplx west = 2.0 / ((hl + hr) * hl);
    c.east[i] = -east;
    c.west[i] = -west;
    c.center[i] = east + west;
  }
  return c;
}

}  // namespace

StencilOperator::StencilOperator(ComplexGrid grid, WavenumberField k, OperatorMode mode, double csl_beta)
    : grid_(std::move(grid)), k_(std::move(k)), mode_(mode), csl_beta_(csl_beta), shift_(1.0) {
  if (k_.n_x != grid_.n_x || k_.n_y != grid_.n_y) throw InvalidArgument("StencilOperator: k field shape mismatch");
  if (grid_.spacing_x.size() != std::size_t(grid_.n_x) + 1 || grid_.spacing_y.size() != std::size_t(grid_.n_y) + 1)
    throw InvalidArgument("StencilOperator: grid spacing arrays have wrong length");
  switch (mode_) {
    case OperatorMode::physical:
      if (grid_.kind != GridKind::physical) throw InvalidArgument("StencilOperator: physical mode needs a physical grid");
      break;
    case OperatorMode::precond_grid:
      if (grid_.kind != GridKind::precond_grid)
        throw InvalidArgument("StencilOperator: precond_grid mode needs a rotated grid");
      break;
    case OperatorMode::precond_csl:
      if (grid_.kind == GridKind::precond_grid)
        throw InvalidArgument("StencilOperator: precond_csl mode needs an unrotated grid");
      if (!(csl_beta_ > 0.0)) throw InvalidArgument("StencilOperator: csl shift beta must be > 0");
      grid_.kind = GridKind::precond_csl;
      grid_.beta = csl_beta_;
      shift_ = cplx(1.0, csl_beta_);
      break;
  }

  const AxisCoeffs cx = axis_coeffs(grid_.spacing_x);
  const AxisCoeffs cy = axis_coeffs(grid_.spacing_y);
  Stencil& s = stencil_;
  s.nx = grid_.n_x;
  s.ny = grid_.n_y;
  s.west = cx.west;
  s.east = cx.east;
  s.south = cy.west;
  s.north = cy.east;
  s.center.resize(size());
  s.inv_center.resize(size());
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      const std::size_t idx = std::size_t(j) * s.nx + i;
      const double kk = k_(i, j);
      const cplx lap = cx.center[std::size_t(i)] + cy.center[std::size_t(j)];
      const cplx d = lap - shift_ * (kk * kk);
      if (!(std::abs(d) > 1e-12 * std::abs(lap)))
        throw NumericalError("StencilOperator: resonant diagonal at node (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      s.center[idx] = d;
      s.inv_center[idx] = 1.0 / d;
    }
}

void StencilOperator::apply(std::span<const cplx> u, std::span<cplx> v, Exec exec) const {
  kernels::apply(stencil_, u, v, exec);
}

Field StencilOperator::apply(const Field& u) const {
  if (u.nx() != nx() || u.ny() != ny()) throw InvalidArgument("StencilOperator::apply: shape mismatch");
  Field v(nx(), ny());
  apply(u.values(), v.values());
  return v;
}

Field StencilOperator::diagonal() const {
  Field d(nx(), ny());
  std::copy(stencil_.center.begin(), stencil_.center.end(), d.values().begin());
  return d;
}

void StencilOperator::residual(std::span<const cplx> b, std::span<const cplx> u, std::span<cplx> r) const {
  if (b.size() != size() || r.size() != size()) throw InvalidArgument("StencilOperator::residual: shape mismatch");
  apply(u, r);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
}

Field StencilOperator::residual(const Field& b, const Field& u) const {
  require_same_shape(b, u, "StencilOperator::residual");
  if (b.nx() != nx() || b.ny() != ny()) throw InvalidArgument("StencilOperator::residual: shape mismatch");
  Field r(nx(), ny());
  residual(b.values(), u.values(), r.values());
  return r;
}

DenseMatrix assemble_dense(const StencilOperator& op) {
  const int nx = op.nx();
  const int ny = op.ny();
  const long long n = (long long)nx * ny;
  if (n > kDenseCap) throw InvalidArgument("assemble_dense: " + std::to_string(n) + " unknowns exceeds cap 4096");
  DenseMatrix m;
  m.n = int(n);
  m.a.assign(std::size_t(n) * std::size_t(n), cplx{});
  const auto& sx = op.grid().spacing_x;
  const auto& sy = op.grid().spacing_y;
  const cplx s = op.shift();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int row = j * nx + i;
      // x: 2/(hl+hr) * [ (u_e - u)/hr - (u - u_w)/hl ], negated.
      const cplx hxl = sx[std::size_t(i)], hxr = sx[std::size_t(i) + 1];
      const cplx hyl = sy[std::size_t(j)], hyr = sy[std::size_t(j) + 1];
      const cplx fx = 2.0 / (hxl + hxr);
      const cplx fy = 2.0 / (hyl + hyr);
      const double kk = op.k_field()(i, j);
      m(row, row) = fx * (1.0 / hxr + 1.0 / hxl) + fy * (1.0 / hyr + 1.0 / hyl) - s * kk * kk;
      if (i > 0) m(row, row - 1) = -fx / hxl;
      if (i + 1 < nx) m(row, row + 1) = -fx / hxr;
      if (j > 0) m(row, row - nx) = -fy / hyl;
      if (j + 1 < ny) m(row, row + nx) = -fy / hyr;
    }
  return m;
}

}  // namespace helm
