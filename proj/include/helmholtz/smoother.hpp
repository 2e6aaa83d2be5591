#pragma once

#include "helmholtz/operator.hpp"
#include "helmholtz/spectrum.hpp"

namespace helm {

struct SmootherKind {
  enum class Type { poly3, gmres } type = Type::gmres;
  int m = 3;  // Krylov dimension for gmres

  static SmootherKind poly() { return {Type::poly3, 3}; }
  static SmootherKind gmres(int m = 3) {
    if (m < 1) throw InvalidArgument("SmootherKind: gmres dimension must be >= 1");
    return {Type::gmres, m};
  }
};

/// u' = u + w D^-1 (b - M u).
Field damped_jacobi(const StencilOperator& op, const Field& u, const Field& b, cplx w);

/// Three damped-Jacobi sweeps with w1, w2, w3 in that order. The error after the call is
/// p(D^-1 M) applied to the error before it. `scratch` is resized as needed.
void poly3_smooth(const StencilOperator& op, Field& u, const Field& b, const SmootherWeights& weights,
                  Field& scratch, Exec exec = Exec::parallel);
Field poly3_smooth(const StencilOperator& op, const Field& u, const Field& b, const SmootherWeights& weights);

/// m Arnoldi steps on the correction equation M c = r0 (zero initial correction), with
/// the Jacobi diagonal as right preconditioner: c minimizes ||r0 - M c|| over
/// D^-1 K_m(M D^-1, r0). Stops early on happy breakdown; returns u unchanged if r0 = 0.
void gmres_smooth(const StencilOperator& op, Field& u, const Field& b, int m = 3);
Field gmres_smooth(const StencilOperator& op, const Field& u, const Field& b, int m);

}  // namespace helm
