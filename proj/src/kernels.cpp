#include "helmholtz/kernels.hpp"

namespace helm::kernels {

namespace {

void check_sizes(const Stencil& s, std::size_t a, std::size_t b, const char* where) {
  const std::size_t n = std::size_t(s.nx) * s.ny;
  if (a != n || b != n) throw InvalidArgument(std::string(where) + ": vector length does not match stencil");
}

void apply_rows(const Stencil& s, const cplx* u, cplx* v, int j0, int j1) {
  for (int j = j0; j < j1; ++j)
    for (int i = 0; i < s.nx; ++i) v[std::size_t(j) * s.nx + i] = stencil_at(s, u, i, j);
}

void sweep_rows(const Stencil& s, cplx w, const cplx* in, const cplx* b, cplx* out, int j0, int j1) {
  for (int j = j0; j < j1; ++j)
    for (int i = 0; i < s.nx; ++i) {
      const std::size_t k = std::size_t(j) * s.nx + i;
      out[k] = jacobi_point(in[k], stencil_at(s, in, i, j), b[k], s.inv_center[k], w);
    }
}

}  // namespace

void apply(const Stencil& s, std::span<const cplx> u, std::span<cplx> v, Exec exec) {
  check_sizes(s, u.size(), v.size(), "kernels::apply");
  if (exec == Exec::serial) {
    apply_rows(s, u.data(), v.data(), 0, s.ny);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny; ++j) apply_rows(s, u.data(), v.data(), j, j + 1);
}

void jacobi_sweep(const Stencil& s, cplx w, std::span<const cplx> in, std::span<const cplx> b,
                  std::span<cplx> out, Exec exec) {
  check_sizes(s, in.size(), out.size(), "kernels::jacobi_sweep");
  check_sizes(s, b.size(), b.size(), "kernels::jacobi_sweep");
  if (exec == Exec::serial) {
    sweep_rows(s, w, in.data(), b.data(), out.data(), 0, s.ny);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny; ++j) sweep_rows(s, w, in.data(), b.data(), out.data(), j, j + 1);
}

}  // namespace helm::kernels
