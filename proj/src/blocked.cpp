#include "helmholtz/blocked.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "helmholtz/smoother.hpp"

namespace helm {

namespace {

struct Box {
  int x0, x1, y0, y1;  // half-open
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long long area() const { return (long long)width() * height(); }
};

Box grow(const Box& b, int by, int nx, int ny) {
  return {std::max(0, b.x0 - by), std::min(nx, b.x1 + by), std::max(0, b.y0 - by), std::min(ny, b.y1 + by)};
}

std::vector<Box> tiles(const StencilOperator& op, const TilePlan& plan) {
  if (plan.ghost < 1) throw InvalidArgument("TilePlan: ghost must be >= 1");
  if (plan.tile_x < 1 || plan.tile_y < 1) throw InvalidArgument("TilePlan: tile sizes must be >= 1");
  const int min_size = 2 * plan.ghost;
  if ((plan.tile_x < op.nx() && plan.tile_x < min_size) || (plan.tile_y < op.ny() && plan.tile_y < min_size))
    throw InvalidArgument("blocked_poly3: tile too small; minimum viable tile is " + std::to_string(min_size) +
                          " per axis");
  std::vector<Box> out;
  for (int y = 0; y < op.ny(); y += plan.tile_y)
    for (int x = 0; x < op.nx(); x += plan.tile_x)
      out.push_back({x, std::min(op.nx(), x + plan.tile_x), y, std::min(op.ny(), y + plan.tile_y)});
  return out;
}

// Per-tile buffers covering the widest (stage 0) region.
struct TileBuffers {
  std::vector<cplx> a, b;
};

void run_tile(const Stencil& s, const Box& tile, int ghost, const std::array<cplx, 3>& w, const cplx* u,
              const cplx* rhs, cplx* out, TileBuffers& buf) {
  const Box outer = grow(tile, ghost, s.nx, s.ny);
  const int bw = outer.width();
  const std::size_t cells = std::size_t(outer.area());
  if (buf.a.size() < cells) {
    buf.a.resize(cells);
    buf.b.resize(cells);
  }
  auto local = [&](int i, int j) { return std::size_t(j - outer.y0) * bw + std::size_t(i - outer.x0); };
  for (int j = outer.y0; j < outer.y1; ++j)
    std::copy_n(u + std::size_t(j) * s.nx + outer.x0, bw, buf.a.data() + local(outer.x0, j));

  cplx* src = buf.a.data();
  cplx* dst = buf.b.data();
  for (int sweep = 0; sweep < 3; ++sweep) {
    const Box region = grow(tile, ghost - 1 - sweep, s.nx, s.ny);
    const cplx weight = w[std::size_t(sweep)];
    auto get = [&](int i, int j) { return src[local(i, j)]; };
    for (int j = region.y0; j < region.y1; ++j)
      for (int i = region.x0; i < region.x1; ++i) {
        const std::size_t g = std::size_t(j) * s.nx + i;
        dst[local(i, j)] = kernels::jacobi_point(src[local(i, j)], kernels::stencil_eval(s, i, j, get), rhs[g],
                                                 s.inv_center[g], weight);
      }
    std::swap(src, dst);
  }
  for (int j = tile.y0; j < tile.y1; ++j)
    std::copy_n(src + local(tile.x0, j), tile.width(), out + std::size_t(j) * s.nx + tile.x0);
}

}  // namespace

std::string TilePlan::label(const StencilOperator& op) const {
  if (tile_x >= op.nx() && tile_y >= op.ny()) return "full";
  return std::to_string(tile_x) + "x" + std::to_string(tile_y);
}

Field blocked_poly3(const StencilOperator& op, const Field& u, const Field& b, const SmootherWeights& weights,
                    const TilePlan& plan, Exec exec) {
  require_same_shape(u, b, "blocked_poly3");
  if (u.nx() != op.nx() || u.ny() != op.ny()) throw InvalidArgument("blocked_poly3: shape mismatch with operator");
  if (plan.ghost != 3) throw InvalidArgument("blocked_poly3: the cubic smoother fuses exactly 3 sweeps (ghost = 3)");
  const std::vector<Box> ts = tiles(op, plan);
  Field out(u.nx(), u.ny());
  const Stencil& s = op.stencil();
  const int count = int(ts.size());
  if (exec == Exec::serial) {
    TileBuffers buf;
    for (const Box& t : ts) run_tile(s, t, plan.ghost, weights.w, u.data(), b.data(), out.data(), buf);
    return out;
  }
#pragma omp parallel
  {
    TileBuffers buf;
#pragma omp for schedule(dynamic)
    for (int t = 0; t < count; ++t)
      run_tile(s, ts[std::size_t(t)], plan.ghost, weights.w, u.data(), b.data(), out.data(), buf);
  }
  return out;
}

PlanCost plan_cost(const StencilOperator& op, const TilePlan& plan) {
  const std::vector<Box> ts = tiles(op, plan);
  double updates = 0.0, loaded = 0.0, stored = 0.0;
  for (const Box& t : ts) {
    for (int sweep = 0; sweep < 3; ++sweep) updates += double(grow(t, plan.ghost - 1 - sweep, op.nx(), op.ny()).area());
    loaded += double(grow(t, plan.ghost, op.nx(), op.ny()).area());
    stored += double(t.area());
  }
  const double n = double(op.size());
  constexpr double kBytes = sizeof(cplx);
  return {updates * kernels::kSweepFlopsPerPoint / n, (loaded + stored) * kBytes / n};
}

PlanCost naive_cost() {
  constexpr double kBytes = sizeof(cplx);
  return {3.0 * kernels::kSweepFlopsPerPoint, 3.0 * 2.0 * kBytes};
}

double max_relative_difference(const Field& a, const Field& b) {
  require_same_shape(a, b, "max_relative_difference");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
    if (scale > 0.0) m = std::max(m, std::abs(a[k] - b[k]) / scale);
  }
  return m;
}

std::vector<BenchRow> bench(const StencilOperator& op, const SmootherWeights& weights,
                            const std::vector<TilePlan>& plans, int repetitions, unsigned seed) {
  if (plans.empty()) throw InvalidArgument("bench: empty plan list");
  if (repetitions < 1) throw InvalidArgument("bench: repetitions must be >= 1");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field u(op.nx(), op.ny()), b(op.nx(), op.ny());
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = cplx(uni(rng), uni(rng));
    b[k] = cplx(uni(rng), uni(rng));
  }
  const Field reference = poly3_smooth(op, u, b, weights);

  std::vector<BenchRow> rows;
  for (const TilePlan& plan : plans) {
    BenchRow row;
    row.plan = plan.label(op);
    row.max_rel_diff = max_relative_difference(blocked_poly3(op, u, b, weights, plan), reference);
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const Field out = blocked_poly3(op, u, b, weights, plan);
      times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(times.begin(), times.end());
    row.time_ms = times[times.size() / 2];
    row.variance_flag = row.time_ms > 0.0 && (times.back() - times.front()) / row.time_ms > 0.2;
    row.mlups = 3.0 * double(op.size()) / (row.time_ms * 1e3);
    const PlanCost cost = plan_cost(op, plan);
    row.flops_per_point = cost.flops_per_point;
    row.bytes_per_point = cost.bytes_per_point;
    row.intensity = cost.intensity();
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "plan,time_ms,mlups,flops_per_point,est_bytes_per_point,intensity,variance_flag\n";
  os.precision(10);
  for (const BenchRow& r : rows)
    os << r.plan << ',' << r.time_ms << ',' << r.mlups << ',' << r.flops_per_point << ',' << r.bytes_per_point
       << ',' << r.intensity << ',' << (r.variance_flag ? 1 : 0) << '\n';
}

}  // namespace helm
