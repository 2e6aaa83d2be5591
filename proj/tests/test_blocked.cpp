#include <doctest.h>

#include <sstream>

#include "helmholtz/blocked.hpp"
#include "helmholtz/smoother.hpp"
#include "oracles.hpp"

using namespace helm;

namespace {

// Per point and sweep: five complex multiplies and four complex adds in the stencil, then
// b - Mu, times 1/d, times w, added to u.
constexpr double kHandSweepFlops = (5 * 6 + 4 * 2) + (2 + 6 + 6 + 2);

SmootherWeights sample_weights() {
  SmootherWeights w;
  w.w = {cplx(0.5, 0.1), cplx(0.8, -0.2), cplx(1.1, 0.3)};
  return w;
}

std::vector<TilePlan> ladder(const StencilOperator& op) {
  return {{8, 8, 3}, {16, 16, 3}, {32, 32, 3}, {64, 64, 3}, TilePlan::full(op)};
}

}  // namespace

TEST_CASE("single tile is bitwise identical to the naive smoother") {
  const StencilOperator op = oracle::make_operator(31, 20.0, 1.0, OperatorMode::precond_grid);
  const Field u = oracle::random_field(31, 31, 1), b = oracle::random_field(31, 31, 2);
  const Field naive = poly3_smooth(op, u, b, sample_weights());
  const Field blocked = blocked_poly3(op, u, b, sample_weights(), TilePlan::full(op));
  CHECK(oracle::to_vec(naive) == oracle::to_vec(blocked));
}

TEST_CASE("zero weights leave the iterate unchanged for any plan") {
  const StencilOperator op = oracle::make_operator(31, 10.0, 1.0, OperatorMode::precond_grid);
  const Field u = oracle::random_field(31, 31, 3), b = oracle::random_field(31, 31, 4);
  for (const TilePlan& p : ladder(op)) CHECK(oracle::to_vec(blocked_poly3(op, u, b, SmootherWeights{}, p)) == oracle::to_vec(u));
}

TEST_CASE("every plan matches the naive smoother on 129x129") {
  const StencilOperator op = oracle::make_operator(129, 80.0, 1.0, OperatorMode::precond_grid);
  const Field u = oracle::random_field(129, 129, 5), b = oracle::random_field(129, 129, 6);
  const Field naive = poly3_smooth(op, u, b, sample_weights());
  std::vector<TilePlan> plans = ladder(op);
  plans.push_back({6, 40, 3});
  plans.push_back({129, 7, 3});
  for (const TilePlan& p : plans) {
    CHECK(max_relative_difference(blocked_poly3(op, u, b, sample_weights(), p), naive) <= 1e-15);
    CHECK(max_relative_difference(blocked_poly3(op, u, b, sample_weights(), p, Exec::serial), naive) <= 1e-15);
  }
}

TEST_CASE("tile size checks") {
  const StencilOperator op = oracle::make_operator(31, 10.0, 0.0, OperatorMode::precond_grid);
  const Field u(31, 31), b(31, 31);
  CHECK_THROWS_WITH_AS(blocked_poly3(op, u, b, sample_weights(), {5, 16, 3}), doctest::Contains("tile too small"),
                       InvalidArgument);
  CHECK_THROWS_AS(blocked_poly3(op, u, b, sample_weights(), {0, 16, 3}), InvalidArgument);
  CHECK_NOTHROW(blocked_poly3(op, u, b, sample_weights(), {6, 6, 3}));
  CHECK_THROWS_AS(blocked_poly3(op, Field(15, 15), Field(15, 15), sample_weights(), {8, 8, 3}), InvalidArgument);
}

TEST_CASE("flop model matches the hand count") {
  const StencilOperator op = oracle::make_operator(63, 20.0, 1.0, OperatorMode::precond_grid);
  CHECK(naive_cost().flops_per_point == 3.0 * kHandSweepFlops);
  CHECK(naive_cost().bytes_per_point == 3.0 * 2.0 * 16.0);
  const PlanCost full = plan_cost(op, TilePlan::full(op));
  CHECK(full.flops_per_point == doctest::Approx(3.0 * kHandSweepFlops));
  CHECK(full.bytes_per_point == doctest::Approx(2.0 * 16.0));
}

TEST_CASE("cost model is monotone over the tile ladder") {
  const StencilOperator op = oracle::make_operator(129, 80.0, 1.0, OperatorMode::precond_grid);
  const std::vector<TilePlan> plans = ladder(op);
  for (std::size_t i = 1; i < plans.size(); ++i) {
    const PlanCost prev = plan_cost(op, plans[i - 1]), cur = plan_cost(op, plans[i]);
    CHECK(cur.bytes_per_point <= prev.bytes_per_point);
    CHECK(cur.flops_per_point <= prev.flops_per_point);
    CHECK(cur.intensity() >= prev.intensity());
  }
  // Halo recomputation never costs less than the naive count.
  for (const TilePlan& p : plans) CHECK(plan_cost(op, p).flops_per_point >= naive_cost().flops_per_point - 1e-9);
}

TEST_CASE("benchmark rows") {
  const StencilOperator op = oracle::make_operator(63, 20.0, 1.0, OperatorMode::precond_grid);
  const std::vector<BenchRow> one = bench(op, sample_weights(), {TilePlan{16, 16, 3}}, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].plan == "16x16");
  CHECK(one[0].max_rel_diff <= 1e-15);
  CHECK(one[0].time_ms > 0.0);
  CHECK(one[0].flops_per_point == plan_cost(op, {16, 16, 3}).flops_per_point);

  const std::vector<BenchRow> a = bench(op, sample_weights(), ladder(op), 2);
  const std::vector<BenchRow> b = bench(op, sample_weights(), ladder(op), 2);
  REQUIRE(a.size() == 5);
  CHECK(a.back().plan == "full");
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].max_rel_diff == b[i].max_rel_diff);

  std::ostringstream os;
  write_bench_csv(os, a);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "plan,time_ms,mlups,flops_per_point,est_bytes_per_point,intensity,variance_flag");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("max relative difference") {
  Field a(2, 1), b(2, 1);
  CHECK(max_relative_difference(a, b) == 0.0);
  a[0] = 2.0;
  b[0] = 1.0;
  CHECK(max_relative_difference(a, b) == 0.5);
  CHECK_THROWS_AS(max_relative_difference(a, Field(1, 2)), InvalidArgument);
}
