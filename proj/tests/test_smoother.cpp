#include <doctest.h>

#include <cmath>
#include <utility>

#include "helmholtz/smoother.hpp"
#include "oracles.hpp"

using namespace helm;

namespace {

SmootherWeights weights_of(cplx a, cplx b, cplx c) {
  SmootherWeights w;
  w.w = {a, b, c};
  return w;
}

// Residual of the best correction from D^-1 K_m(M D^-1, r0), by dense least squares.
double krylov_oracle_residual(const oracle::Mat& m, const oracle::Vec& r0, int steps) {
  const oracle::Vec dinv = m.diagonal().cwiseInverse();
  oracle::Mat basis(m.rows(), steps);
  oracle::Vec v = r0;
  for (int j = 0; j < steps; ++j) {
    basis.col(j) = dinv.cwiseProduct(v);
    v = m * basis.col(j);
  }
  const oracle::Mat mb = m * basis;
  const oracle::Vec y = mb.colPivHouseholderQr().solve(r0);
  return (r0 - mb * y).norm();
}

}  // namespace

TEST_CASE("damped Jacobi with zero weight is the identity") {
  const StencilOperator op = oracle::make_operator(8, 5.0, 1.0, OperatorMode::precond_grid, 0.5, 2);
  const Field u = oracle::random_field(8, 8, 1), b = oracle::random_field(8, 8, 2);
  const Field v = damped_jacobi(op, u, b, 0.0);
  CHECK(oracle::to_vec(v) == oracle::to_vec(u));
}

TEST_CASE("damped Jacobi solves a single unknown") {
  ComplexGrid g;
  g.n_x = g.n_y = 1;
  g.spacing_x = g.base_x = {0.5, 0.5};
  g.spacing_y = g.base_y = {0.5, 0.5};
  WavenumberField k;
  k.n_x = k.n_y = 1;
  k.values = {2.0};
  const StencilOperator op(g, k, OperatorMode::physical);
  Field b(1, 1);
  b[0] = cplx(3.0, -1.0);
  const Field u = damped_jacobi(op, Field(1, 1), b, 1.0);
  CHECK(std::abs(u[0] - b[0] / cplx(16.0 - 4.0)) < 1e-15);
}

TEST_CASE("damped Jacobi matches the dense formula") {
  const StencilOperator op = oracle::make_operator(8, 6.0, 1.0, OperatorMode::precond_csl, 0.5, 2);
  const oracle::Mat m = oracle::to_eigen(assemble_dense(op));
  const Field u = oracle::random_field(8, 8, 3), b = oracle::random_field(8, 8, 4);
  const cplx w(0.7, -0.2);
  const oracle::Vec uv = oracle::to_vec(u);
  const oracle::Vec expected = uv + w * m.diagonal().cwiseInverse().cwiseProduct(oracle::to_vec(b) - m * uv);
  CHECK(oracle::rel_diff(oracle::to_vec(damped_jacobi(op, u, b, w)), expected) <= 1e-12);
}

TEST_CASE("poly3 trivial cases") {
  const StencilOperator op = oracle::make_operator(9, 6.0, 1.0, OperatorMode::precond_grid, 0.5, 2);
  const Field u = oracle::random_field(9, 9, 5), b = oracle::random_field(9, 9, 6);
  const SmootherWeights w = weights_of({0.5, 0.1}, {0.8, -0.2}, {1.1, 0.3});
  CHECK(oracle::to_vec(poly3_smooth(op, u, b, SmootherWeights{})) == oracle::to_vec(u));
  // The exact solution is a fixed point.
  const Field bx = op.apply(u);
  CHECK(oracle::rel_diff(oracle::to_vec(poly3_smooth(op, u, bx, w)), oracle::to_vec(u)) <= 1e-14);
}

TEST_CASE("poly3 error propagation is p(D^-1 M)") {
  const StencilOperator op = oracle::make_operator(10, 7.0, 1.0, OperatorMode::precond_grid, 0.5, 2);
  const oracle::Mat m = oracle::to_eigen(assemble_dense(op));
  const Field exact = oracle::random_field(10, 10, 7);
  const Field b = op.apply(exact);
  const Field u = oracle::random_field(10, 10, 8);
  const SmootherWeights w = weights_of({0.5, 0.1}, {0.8, -0.2}, {1.1, 0.3});
  const oracle::Vec e0 = oracle::to_vec(u) - oracle::to_vec(exact);
  const oracle::Vec e_oracle = oracle::poly3_of(w.w, oracle::jacobi_normalized(m)) * e0;
  const oracle::Vec e_got = oracle::to_vec(poly3_smooth(op, u, b, w)) - oracle::to_vec(exact);
  CHECK(std::abs(e_got.norm() - e_oracle.norm()) <= 1e-11 * e0.norm());
  CHECK(oracle::rel_diff(e_got, e_oracle) <= 1e-11);
}

TEST_CASE("poly3 serial and parallel agree bitwise") {
  const StencilOperator op = oracle::make_operator(31, 20.0, 1.0, OperatorMode::precond_grid);
  const Field b = oracle::random_field(31, 31, 9);
  const SmootherWeights w = weights_of({0.5, 0.1}, {0.8, -0.2}, {1.1, 0.3});
  Field u1 = oracle::random_field(31, 31, 10), u2 = u1, s1, s2;
  poly3_smooth(op, u1, b, w, s1, Exec::serial);
  poly3_smooth(op, u2, b, w, s2, Exec::parallel);
  CHECK(oracle::to_vec(u1) == oracle::to_vec(u2));
}

TEST_CASE("gmres smoother leaves an exact solution alone") {
  const StencilOperator op = oracle::make_operator(8, 5.0, 0.0, OperatorMode::precond_grid);
  const Field u = oracle::random_field(8, 8, 11);
  const Field b = op.apply(u);
  const Field v = gmres_smooth(op, u, b, 3);
  CHECK(oracle::rel_diff(oracle::to_vec(v), oracle::to_vec(u)) <= 1e-15);
  Field w = op.make_field();
  gmres_smooth(op, w, op.make_field(), 3);
  CHECK(norm2(w) == 0.0);
}

TEST_CASE("gmres smoother with a full Krylov space solves exactly") {
  const StencilOperator op = oracle::make_operator(3, 2.0, 1.0, OperatorMode::precond_grid, 0.5, 1);
  const Field b = oracle::random_field(3, 3, 12);
  const Field u = gmres_smooth(op, op.make_field(), b, 9);
  CHECK(norm2(op.residual(b, u)) <= 1e-10 * norm2(b));
}

TEST_CASE("gmres smoother minimizes over the weighted Krylov space") {
  const StencilOperator op = oracle::make_operator(12, 8.0, 1.0, OperatorMode::precond_grid, 0.5, 3);
  const oracle::Mat m = oracle::to_eigen(assemble_dense(op));
  for (int steps : {1, 2, 3, 5}) {
    const Field u = oracle::random_field(12, 12, 13u + unsigned(steps));
    const Field b = oracle::random_field(12, 12, 23u + unsigned(steps));
    const oracle::Vec r0 = oracle::to_vec(op.residual(b, u));
    const double expected = krylov_oracle_residual(m, r0, steps);
    const double got = norm2(op.residual(b, gmres_smooth(op, u, b, steps)));
    CHECK(std::abs(got - expected) <= 1e-10 * r0.norm());
  }
}

TEST_CASE("gmres3 is bounded by poly3 from the same start") {
  const StencilOperator op = oracle::make_operator(12, 8.0, 1.0, OperatorMode::precond_grid, 0.5, 3);
  const SmootherWeights w = analyze_level(op, 0).weights;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Field u = oracle::random_field(12, 12, 100 + seed), b = oracle::random_field(12, 12, 200 + seed);
    const double r0 = norm2(op.residual(b, u));
    const double rg = norm2(op.residual(b, gmres_smooth(op, u, b, 3)));
    const double rp = norm2(op.residual(b, poly3_smooth(op, u, b, w)));
    CHECK(rg <= rp + 1e-12 * r0);
  }
}

TEST_CASE("gmres smoother is not an affine map") {
  const StencilOperator op = oracle::make_operator(12, 8.0, 1.0, OperatorMode::precond_grid, 0.5, 3);
  const Field b = oracle::random_field(12, 12, 31);
  const Field u1 = oracle::random_field(12, 12, 32), u2 = oracle::random_field(12, 12, 33);
  Field sum = u1;
  axpy(cplx(1.0), u2.values(), sum.values());
  // An affine G would satisfy G(u1 + u2) = G(u1) + G(u2) - G(0).
  const oracle::Vec lhs = oracle::to_vec(gmres_smooth(op, std::as_const(sum), b, 3));
  const oracle::Vec rhs = oracle::to_vec(gmres_smooth(op, u1, b, 3)) + oracle::to_vec(gmres_smooth(op, u2, b, 3)) -
                          oracle::to_vec(gmres_smooth(op, op.make_field(), b, 3));
  CHECK(oracle::rel_diff(lhs, rhs) > 1e-6);
}

TEST_CASE("smoothers are deterministic") {
  const StencilOperator op = oracle::make_operator(15, 10.0, 1.0, OperatorMode::precond_grid);
  const Field u = oracle::random_field(15, 15, 41), b = oracle::random_field(15, 15, 42);
  CHECK(oracle::to_vec(gmres_smooth(op, u, b, 3)) == oracle::to_vec(gmres_smooth(op, u, b, 3)));
  const SmootherWeights w = weights_of({0.5, 0.1}, {0.8, -0.2}, {1.1, 0.3});
  CHECK(oracle::to_vec(poly3_smooth(op, u, b, w)) == oracle::to_vec(poly3_smooth(op, u, b, w)));
}

TEST_CASE("smoother argument checks") {
  const StencilOperator op = oracle::make_operator(7, 3.0, 0.0, OperatorMode::physical);
  CHECK_THROWS_AS(damped_jacobi(op, Field(5, 5), Field(7, 7), 1.0), InvalidArgument);
  CHECK_THROWS_AS(gmres_smooth(op, Field(7, 7), Field(7, 7), 0), InvalidArgument);
  CHECK_THROWS_AS(SmootherKind::gmres(0), InvalidArgument);
}
