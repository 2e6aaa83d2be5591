#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <numbers>
#include <random>

#include "helmholtz/spectrum.hpp"

namespace helm {

namespace {

constexpr int kDim = 6;
using Point = std::array<double, kDim>;

std::array<cplx, 3> unpack(const Point& x) { return {cplx(x[0], x[1]), cplx(x[2], x[3]), cplx(x[4], x[5])}; }
Point pack(const std::array<cplx, 3>& w) {
  return {w[0].real(), w[0].imag(), w[1].real(), w[1].imag(), w[2].real(), w[2].imag()};
}

struct Result {
  Point x{};
  double f = std::numeric_limits<double>::infinity();
};

// Adaptive-parameter Nelder-Mead; re-initializes the simplex around the incumbent when it
// collapses, until `budget` evaluations are spent.
Result nelder_mead(const std::function<double(const Point&)>& f, Point x0, double step, int budget) {
  constexpr double n = kDim;
  const double alpha = 1.0, gamma_ = 1.0 + 2.0 / n, rho = 0.75 - 0.5 / n, shrink = 1.0 - 1.0 / n;
  int evals = 0;
  Result best;
  auto eval = [&](const Point& x) {
    ++evals;
    const double v = f(x);
    if (v < best.f) best = {x, v};
    return v;
  };

  while (evals < budget) {
    std::array<Point, kDim + 1> s;
    std::array<double, kDim + 1> fs;
    s[0] = x0;
    fs[0] = eval(x0);
    for (int i = 0; i < kDim; ++i) {
      s[std::size_t(i) + 1] = x0;
      s[std::size_t(i) + 1][std::size_t(i)] += step;
      fs[std::size_t(i) + 1] = eval(s[std::size_t(i) + 1]);
    }
    while (evals < budget) {
      std::array<int, kDim + 1> order;
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[std::size_t(a)] < fs[std::size_t(b)]; });
      const auto lo = std::size_t(order.front()), hi = std::size_t(order.back()), second = std::size_t(order[kDim - 1]);

      double size = 0.0;
      for (std::size_t i = 0; i <= kDim; ++i)
        for (std::size_t d = 0; d < kDim; ++d) size = std::max(size, std::abs(s[i][d] - s[lo][d]));
      if (size < 1e-12 || fs[hi] - fs[lo] < 1e-15) break;

      Point c{};
      for (std::size_t i = 0; i <= kDim; ++i)
        if (i != hi)
          for (std::size_t d = 0; d < kDim; ++d) c[d] += s[i][d] / n;
      auto along = [&](double t) {
        Point p;
        for (std::size_t d = 0; d < kDim; ++d) p[d] = c[d] + t * (s[hi][d] - c[d]);
        return p;
      };
      const Point xr = along(-alpha);
      const double fr = eval(xr);
      if (fr < fs[lo]) {
        const Point xe = along(-gamma_);
        const double fe = eval(xe);
        if (fe < fr) {
          s[hi] = xe;
          fs[hi] = fe;
        } else {
          s[hi] = xr;
          fs[hi] = fr;
        }
      } else if (fr < fs[second]) {
        s[hi] = xr;
        fs[hi] = fr;
      } else {
        const bool outside = fr < fs[hi];
        const Point xc = along(outside ? -rho : rho);
        const double fc = eval(xc);
        if (fc < std::min(fr, fs[hi])) {
          s[hi] = xc;
          fs[hi] = fc;
        } else {
          for (std::size_t i = 0; i <= kDim; ++i) {
            if (i == lo) continue;
            for (std::size_t d = 0; d < kDim; ++d) s[i][d] = s[lo][d] + shrink * (s[i][d] - s[lo][d]);
            fs[i] = eval(s[i]);
          }
        }
      }
    }
    x0 = best.x;
    step *= 0.5;
    if (step < 1e-10) break;
  }
  return best;
}

// Three Chebyshev nodes on the segment [a, b] turned into damped-Jacobi weights 1/z.
std::array<cplx, 3> chebyshev_seed(cplx a, cplx b) {
  std::array<cplx, 3> w{};
  for (int i = 0; i < 3; ++i) {
    const cplx z = 0.5 * (a + b) + 0.5 * (b - a) * std::cos((2.0 * i + 1.0) * std::numbers::pi / 6.0);
    w[std::size_t(i)] = std::abs(z) > 0.0 ? 1.0 / z : cplx(0.0);
  }
  return w;
}

std::pair<cplx, cplx> farthest_pair(std::span<const cplx> pts) {
  std::pair<cplx, cplx> best{pts.front(), pts.front()};
  double d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) > d) {
        d = std::abs(pts[i] - pts[j]);
        best = {pts[i], pts[j]};
      }
  return best;
}

}  // namespace

SmootherWeights optimize_weights(const Triangle& t, std::span<const cplx> hf_hull, const OptimizerOptions& opt) {
  if (hf_hull.empty()) throw InvalidArgument("optimize_weights: empty high-frequency hull");
  if (t.area() <= 0.0) throw InvalidArgument("optimize_weights: degenerate triangle");
  const int per_edge = std::max(opt.boundary_samples, 256);
  const std::vector<cplx> tri = boundary_samples(t.v, per_edge);
  const std::vector<cplx> hf = perimeter_samples(hf_hull, 3 * per_edge);

  auto objective = [&](const Point& x) {
    const auto w = unpack(x);
    const double stab = poly_max_on_boundary(w, tri);
    const double smooth = poly_max_on_boundary(w, hf);
    return smooth + 100.0 * std::max(0.0, stab - 1.0);
  };

  const cplx c = t.centroid();
  const double scale = 1.0 / std::max(std::abs(c), 1e-300);
  const double omega = (2.0 / 3.0) * scale;
  std::vector<std::array<cplx, 3>> seeds;
  seeds.push_back({omega, omega, omega});
  seeds.push_back({(2.0 / 3.0) / c, (2.0 / 3.0) / c, (2.0 / 3.0) / c});
  {
    const auto [a, b] = farthest_pair(hf_hull);
    seeds.push_back(chebyshev_seed(a, b));
  }
  {
    const auto [a, b] = farthest_pair(t.v);
    seeds.push_back(chebyshev_seed(a, b));
  }
  const int restarts = std::max(opt.restarts, 8);
  std::mt19937 rng(20240521u);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (int(seeds.size()) < restarts) {
    auto s = seeds[seeds.size() % 4];
    for (cplx& w : s) w += 0.5 * scale * cplx(normal(rng), normal(rng));
    seeds.push_back(s);
  }

  const int per_restart = std::max(opt.budget / restarts, 50);
  Result best;
  for (const auto& seed : seeds) {
    const Result r = nelder_mead(objective, pack(seed), 0.2 * scale, per_restart);
    if (r.f < best.f) best = r;  // strict: ties keep the earlier restart
  }

  // Pull toward w = 0 (always stable) until the refined boundary maximum is feasible.
  auto w = unpack(best.x);
  if (refined_boundary_max(w, t.v) > 1.0 + 1e-10) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const std::array<cplx, 3> wm{mid * w[0], mid * w[1], mid * w[2]};
      (refined_boundary_max(wm, t.v) <= 1.0 + 1e-10 ? lo : hi) = mid;
    }
    w = {lo * w[0], lo * w[1], lo * w[2]};
  }

  SmootherWeights out;
  out.w = w;
  out.achieved_stability = refined_boundary_max(w, t.v);
  out.achieved_smoothing = refined_boundary_max(w, hf_hull);
  if (out.achieved_stability > 1.0 + 1e-8)
    throw UnstableLevel("optimize_weights: unstable level, no weights with max |p| <= 1 on the triangle", out);
  return out;
}

LevelSpectrum analyze_level(const StencilOperator& level, int level_index, const SpectrumOptions& opt) {
  LevelSpectrum ls;
  ls.level = level_index;
  ls.samples = symbol_samples(level, opt.theta_count, level_index);
  Hull hull = convex_hull(ls.samples.points);
  if (hull.degenerate) hull = thicken(hull, opt.thicken);
  const Hull hf = convex_hull(ls.samples.hf_points());

  // The minimal triangle can enclose an origin the hull avoids, and when it does not it
  // may still be a poor design region; narrower triangles compete on achieved smoothing.
  std::vector<Orientation> candidates;
  const Orientation minimal = orient_lower_half(min_enclosing_triangle(hull, opt.inflate));
  if (minimal.half_plane_bounded) candidates.push_back(minimal);
  for (const auto& t : {anchored_triangle(hull, opt.inflate), anchored_triangle(hull, opt.inflate, TriangleFit::diameter),
                        apex_triangle(hull, 0.0, opt.inflate)}) {
    if (!t) continue;
    const Orientation o = orient_lower_half(*t);
    if (o.half_plane_bounded) candidates.push_back(o);
  }
  if (candidates.empty()) candidates.push_back(minimal);

  std::vector<Hull> oriented_hf(candidates.size());
  std::vector<SmootherWeights> designed(candidates.size());
  std::vector<std::exception_ptr> failure(candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    try {
      std::vector<cplx> mapped;
      for (const cplx& z : hf.vertices) mapped.push_back(candidates[c].frame.to_oriented(z));
      oriented_hf[c] = convex_hull(mapped);
      designed[c] = optimize_weights(candidates[c].triangle, oriented_hf[c].vertices, opt.optimizer);
    } catch (...) {
      failure[c] = std::current_exception();
    }
  }
  std::size_t pick = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (!failure[c] && (pick == candidates.size() ||
                        designed[c].achieved_smoothing < designed[pick].achieved_smoothing))
      pick = c;
  if (pick == candidates.size()) std::rethrow_exception(failure.front());
  const Orientation& o = candidates[pick];
  ls.frame = o.frame;
  ls.triangle = o.triangle;
  ls.half_plane_bounded = o.half_plane_bounded;
  ls.diagnostic = o.diagnostic;
  ls.hf_hull = std::move(oriented_hf[pick]);
  ls.oriented_weights = designed[pick];
  ls.weights = ls.oriented_weights;
  for (std::size_t i = 0; i < 3; ++i) ls.weights.w[i] = ls.frame.weight_to_symbol(ls.oriented_weights.w[i]);
  return ls;
}

}  // namespace helm
