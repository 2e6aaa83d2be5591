#pragma once

// Stencil kernels: a serial reference and an OpenMP row-partitioned variant of each
// loop. Both evaluate the same per-point expressions, so their results agree bitwise.

#include <span>
#include <vector>

#include "helmholtz/field.hpp"

namespace helm {

enum class Exec { serial, parallel };

/// Five-point operator in coefficient form:
///   (A u)_ij = center_ij u_ij + west_i u_{i-1,j} + east_i u_{i+1,j} + south_j u_{i,j-1} + north_j u_{i,j+1}
/// with zero values outside the interior.
struct Stencil {
  int nx = 0;
  int ny = 0;
  std::vector<cplx> west, east;    // length nx
  std::vector<cplx> south, north;  // length ny
  std::vector<cplx> center;        // nx * ny
  std::vector<cplx> inv_center;    // nx * ny
};

namespace kernels {

/// Stencil value at (i, j); `get(ii, jj)` returns the iterate at an interior node. Every
/// kernel goes through this one expression so blocked and naive paths round identically.
template <class Get>
inline cplx stencil_eval(const Stencil& s, int i, int j, Get&& get) {
  cplx v = s.center[std::size_t(j) * s.nx + i] * get(i, j);
  if (i > 0) v += s.west[std::size_t(i)] * get(i - 1, j);
  if (i + 1 < s.nx) v += s.east[std::size_t(i)] * get(i + 1, j);
  if (j > 0) v += s.south[std::size_t(j)] * get(i, j - 1);
  if (j + 1 < s.ny) v += s.north[std::size_t(j)] * get(i, j + 1);
  return v;
}

inline cplx stencil_at(const Stencil& s, const cplx* u, int i, int j) {
  return stencil_eval(s, i, j, [&](int ii, int jj) { return u[std::size_t(jj) * s.nx + ii]; });
}

/// One damped-Jacobi point update u + w (D^-1 (b - A u)).
inline cplx jacobi_point(cplx u, cplx au, cplx b, cplx inv_d, cplx w) { return u + w * (inv_d * (b - au)); }

void apply(const Stencil& s, std::span<const cplx> u, std::span<cplx> v, Exec exec = Exec::parallel);

/// out = in + w D^-1 (b - A in). `out` must not alias `in`.
void jacobi_sweep(const Stencil& s, cplx w, std::span<const cplx> in, std::span<const cplx> b,
                  std::span<cplx> out, Exec exec = Exec::parallel);

/// Complex flops of one jacobi_point plus one interior stencil_at, counted by hand:
/// 5 complex multiplies (6 flops) + 4 complex adds (2) for the stencil, then
/// subtract (2), two multiplies (12) and an add (2) for the update.
inline constexpr int kStencilFlops = 5 * 6 + 4 * 2;
inline constexpr int kUpdateFlops = 2 + 2 * 6 + 2;
inline constexpr int kSweepFlopsPerPoint = kStencilFlops + kUpdateFlops;

}  // namespace kernels
}  // namespace helm
