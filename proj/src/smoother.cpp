#include "helmholtz/smoother.hpp"

#include <cmath>
#include <vector>

namespace helm {

namespace {

void check(const StencilOperator& op, const Field& u, const Field& b, const char* where) {
  require_same_shape(u, b, where);
  if (u.nx() != op.nx() || u.ny() != op.ny()) throw InvalidArgument(std::string(where) + ": shape mismatch with operator");
}

}  // namespace

Field damped_jacobi(const StencilOperator& op, const Field& u, const Field& b, cplx w) {
  check(op, u, b, "damped_jacobi");
  Field out(u.nx(), u.ny());
  kernels::jacobi_sweep(op.stencil(), w, u.values(), b.values(), out.values());
  return out;
}

void poly3_smooth(const StencilOperator& op, Field& u, const Field& b, const SmootherWeights& weights,
                  Field& scratch, Exec exec) {
  check(op, u, b, "poly3_smooth");
  if (!scratch.same_shape(u)) scratch = Field(u.nx(), u.ny());
  kernels::jacobi_sweep(op.stencil(), weights.w[0], u.values(), b.values(), scratch.values(), exec);
  kernels::jacobi_sweep(op.stencil(), weights.w[1], scratch.values(), b.values(), u.values(), exec);
  kernels::jacobi_sweep(op.stencil(), weights.w[2], u.values(), b.values(), scratch.values(), exec);
  std::swap(u, scratch);
}

Field poly3_smooth(const StencilOperator& op, const Field& u, const Field& b, const SmootherWeights& weights) {
  Field out = u, scratch;
  poly3_smooth(op, out, b, weights, scratch);
  return out;
}

void gmres_smooth(const StencilOperator& op, Field& u, const Field& b, int m) {
  check(op, u, b, "gmres_smooth");
  if (m < 1) throw InvalidArgument("gmres_smooth: m must be >= 1");
  const std::size_t n = u.size();
  const auto& inv_d = op.stencil().inv_center;

  std::vector<cplx> r0(n);
  op.residual(b.values(), u.values(), r0);
  const double beta = norm2(r0);
  if (beta == 0.0) return;

  std::vector<std::vector<cplx>> v;
  v.reserve(std::size_t(m) + 1);
  v.emplace_back(r0);
  scale(1.0 / beta, v[0]);
  // Hessenberg columns, with Givens rotations applied as we go.
  std::vector<std::vector<cplx>> h;
  std::vector<cplx> g(std::size_t(m) + 1, 0.0);
  const std::size_t dim = std::size_t(m);
  std::vector<double> cs(dim);
  std::vector<cplx> sn(dim);
  g[0] = beta;

  std::vector<cplx> z(n), w(n);
  int steps = 0;
  for (int j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_d[k] * v[std::size_t(j)][k];
    op.apply(z, w);
    std::vector<cplx> col(std::size_t(j) + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const cplx hij = dot(v[std::size_t(i)], w);
        col[std::size_t(i)] += hij;
        axpy(-hij, v[std::size_t(i)], w);
      }
      const double wn = norm2(w);
      double loss = 0.0;
      for (int i = 0; i <= j && wn > 0.0; ++i) loss = std::max(loss, std::abs(dot(v[std::size_t(i)], w)) / wn);
      if (loss <= 1e-8) break;
    }
    const double hnext = norm2(w);
    col[std::size_t(j) + 1] = hnext;

    for (int i = 0; i < j; ++i) {
      const cplx a = col[std::size_t(i)], c = col[std::size_t(i) + 1];
      col[std::size_t(i)] = cs[std::size_t(i)] * a + sn[std::size_t(i)] * c;
      col[std::size_t(i) + 1] = -std::conj(sn[std::size_t(i)]) * a + cs[std::size_t(i)] * c;
    }
    const cplx a = col[std::size_t(j)];
    const double denom = std::hypot(std::abs(a), hnext);
    if (denom == 0.0) break;
    cs[std::size_t(j)] = std::abs(a) / denom;
    sn[std::size_t(j)] = (std::abs(a) == 0.0 ? cplx(1.0) : a / std::abs(a)) * hnext / denom;
    col[std::size_t(j)] = cs[std::size_t(j)] * a + sn[std::size_t(j)] * hnext;
    col[std::size_t(j) + 1] = 0.0;
    g[std::size_t(j) + 1] = -std::conj(sn[std::size_t(j)]) * g[std::size_t(j)];
    g[std::size_t(j)] = cs[std::size_t(j)] * g[std::size_t(j)];
    h.push_back(std::move(col));
    steps = j + 1;
    if (hnext <= 1e-14 * beta) break;  // happy breakdown
    if (j + 1 < m) {
      v.emplace_back(w);
      scale(1.0 / hnext, v.back());
    }
  }

  std::vector<cplx> y(static_cast<std::size_t>(steps));
  for (int i = steps - 1; i >= 0; --i) {
    cplx s = g[std::size_t(i)];
    for (int k = i + 1; k < steps; ++k) s -= h[std::size_t(k)][std::size_t(i)] * y[std::size_t(k)];
    y[std::size_t(i)] = s / h[std::size_t(i)][std::size_t(i)];
  }
  std::fill(z.begin(), z.end(), cplx(0.0));
  for (int i = 0; i < steps; ++i) axpy(y[std::size_t(i)], v[std::size_t(i)], z);
  for (std::size_t k = 0; k < n; ++k) u[k] += inv_d[k] * z[k];
}

Field gmres_smooth(const StencilOperator& op, const Field& u, const Field& b, int m) {
  Field out = u;
  gmres_smooth(op, out, b, m);
  return out;
}

}  // namespace helm
