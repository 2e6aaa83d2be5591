#include "helmholtz/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

namespace helm {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool less_cplx(cplx a, cplx b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

cplx symbol_shift(const StencilOperator& op) {
  switch (op.mode()) {
    case OperatorMode::precond_grid:
      return cplx(1.0, op.grid().beta);
    case OperatorMode::precond_csl:
      return op.shift();
    case OperatorMode::physical:
      break;
  }
  return 1.0;
}

}  // namespace

std::vector<cplx> SymbolSampleSet::hf_points() const {
  std::vector<cplx> out;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (high_frequency[k]) out.push_back(points[k]);
  return out;
}

SymbolSampleSet symbol_samples(const StencilOperator& level, int theta_count, int level_index) {
  if (theta_count < 8) throw InvalidArgument("symbol_samples: theta_count must be >= 8");
  const ComplexGrid& g = level.grid();
  // Base spacings and the exact shift give the same mu for the rotated grid and the
  // shifted Laplacian, bit for bit.
  const cplx s = symbol_shift(level);

  // A family is a frozen (h_x, h_y, k) triple. Isotropic families (h, h, k) cover every
  // spacing; mixed families pair the spacings that meet at a node, which is where layer
  // and interior stencils interact.
  struct Family {
    cplx hx, hy;
    double k;
  };
  auto family_less = [](const Family& a, const Family& b) {
    if (a.hx != b.hx) return less_cplx(a.hx, b.hx);
    if (a.hy != b.hy) return less_cplx(a.hy, b.hy);
    return a.k < b.k;
  };
  std::set<Family, decltype(family_less)> families(family_less);
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_x; ++i) {
      const double k = level.k_field()(i, j);
      for (int a = 0; a < 2; ++a) {
        const cplx hx = g.base_x[std::size_t(i + a)], hy = g.base_y[std::size_t(j + a)];
        families.insert({hx, hx, k});
        families.insert({hy, hy, k});
        for (int b = 0; b < 2; ++b) families.insert({hx, g.base_y[std::size_t(j + b)], k});
      }
    }

  const std::size_t tc = std::size_t(theta_count);
  std::vector<double> two_minus_cos(tc);
  std::vector<std::uint8_t> high(tc);
  for (std::size_t m = 0; m < tc; ++m) {
    const double theta = kPi * double(m + 1) / double(theta_count);
    const double half = std::sin(0.5 * theta);
    two_minus_cos[m] = 4.0 * half * half;
    high[m] = theta >= 0.5 * kPi ? 1 : 0;
  }

  SymbolSampleSet out;
  out.theta_count = theta_count;
  out.level = level_index;
  out.points.reserve(families.size() * tc * tc);
  out.high_frequency.reserve(out.points.capacity());
  for (const Family& f : families) {
    const cplx ix = 1.0 / (f.hx * f.hx), iy = 1.0 / (f.hy * f.hy);
    const cplx shift = s * (f.k * f.k);
    const cplx d = 2.0 * (ix + iy) - shift;
    if (!(std::abs(d) > 1e-12 * std::abs(2.0 * (ix + iy))))
      throw NumericalError("symbol_samples: resonant diagonal on level " + std::to_string(level_index));
    // In a mixed family, a mode confined to the stretched direction oscillates on the
    // layer scale, so that direction is sampled at high frequency only.
    const bool mixed = f.hx != f.hy;
    const bool layer_x = mixed && f.hx.imag() != 0.0, layer_y = mixed && f.hy.imag() != 0.0;
    for (std::size_t my = 0; my < tc; ++my) {
      if (layer_y && !high[my]) continue;
      for (std::size_t mx = 0; mx < tc; ++mx) {
        if (layer_x && !high[mx]) continue;
        out.points.push_back((two_minus_cos[mx] * ix + two_minus_cos[my] * iy - shift) / d);
        out.high_frequency.push_back(high[mx] | high[my]);
      }
    }
  }
  return out;
}

Hull convex_hull(std::span<const cplx> points) {
  if (points.empty()) throw InvalidArgument("convex_hull: no points");
  std::vector<cplx> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), less_cplx);
  p.erase(std::unique(p.begin(), p.end()), p.end());

  Hull h;
  if (p.size() < 3) {
    h.vertices = p;
    h.degenerate = true;
    return h;
  }
  std::vector<cplx> hull(2 * p.size());
  std::size_t k = 0;
  for (const cplx& z : p) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], z - hull[k - 2]) <= 0.0) --k;
    hull[k++] = z;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    const cplx z = p[i];
    while (k >= t && cross(hull[k - 1] - hull[k - 2], z - hull[k - 2]) <= 0.0) --k;
    hull[k++] = z;
  }
  hull.resize(k - 1);

  // Near-collinear sets (rounding noise around a segment) are treated as segments.
  double diam = 0.0;
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j)
      if (std::abs(hull[i] - hull[j]) > diam) {
        diam = std::abs(hull[i] - hull[j]);
        a = i;
        b = j;
      }
  const cplx dir = (hull[b] - hull[a]) / diam;
  double width = 0.0;
  for (const cplx& z : hull) width = std::max(width, std::abs(cross(dir, z - hull[a])));
  if (hull.size() < 3 || width <= 1e-9 * diam) {
    h.vertices = {hull[a], hull[b]};
    h.degenerate = true;
    return h;
  }
  h.vertices = std::move(hull);
  return h;
}

Hull thicken(const Hull& hull, double rel) {
  if (!hull.degenerate) return hull;
  if (hull.vertices.empty()) throw InvalidArgument("thicken: empty hull");
  Hull out;
  if (hull.vertices.size() == 1) {
    const cplx z = hull.vertices[0];
    const double eps = rel * std::max(std::abs(z), 1.0);
    out.vertices = {z + cplx(-eps, -eps), z + cplx(eps, -eps), z + cplx(eps, eps), z + cplx(-eps, eps)};
    return out;
  }
  const cplx p = hull.vertices.front();
  const cplx q = hull.vertices.back();
  const double len = std::abs(q - p);
  const cplx normal = cplx(0.0, 1.0) * (q - p) / len;
  const cplx off = rel * len * normal;
  out.vertices = {p - off, q - off, q + off, p + off};
  return out;
}

double Triangle::area() const { return 0.5 * std::abs(cross(v[1] - v[0], v[2] - v[0])); }

double Triangle::diameter() const {
  return std::max({std::abs(v[0] - v[1]), std::abs(v[1] - v[2]), std::abs(v[2] - v[0])});
}

bool Triangle::contains(cplx z, double slack) const {
  const double orient = cross(v[1] - v[0], v[2] - v[0]) >= 0.0 ? 1.0 : -1.0;
  for (int e = 0; e < 3; ++e) {
    const cplx a = v[std::size_t(e)];
    const cplx b = v[std::size_t((e + 1) % 3)];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    if (orient * cross(b - a, z - a) / len < -slack) return false;
  }
  return true;
}

double Triangle::max_imag() const { return std::max({v[0].imag(), v[1].imag(), v[2].imag()}); }
double Triangle::min_imag() const { return std::min({v[0].imag(), v[1].imag(), v[2].imag()}); }

namespace {

// Angle subtended at the origin by a point set: 2 pi minus the widest angular gap.
// Returns 2 pi when a point sits at the origin.
double origin_span(std::span<const cplx> points) {
  std::vector<double> angles;
  for (const cplx& z : points) {
    if (z == 0.0) return 2.0 * kPi;
    angles.push_back(std::arg(z));
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * kPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return 2.0 * kPi - gap;
}

// Smallest flush triangle, optionally restricted to those whose inflated form passes
// `accept` (exhaustive over the third side in that case).
std::optional<Triangle> flush_search(const Hull& input, double inflate,
                                     const std::function<bool(const Triangle&)>& accept) {
  const Hull hull = input.degenerate || input.vertices.size() < 3 ? thicken(input, 1e-6) : input;
  const auto& v = hull.vertices;

  // Candidate side directions: outward edge normals plus a uniform angular grid.
  std::vector<double> angles;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx e = v[(i + 1) % v.size()] - v[i];
    double a = std::arg(cplx(e.imag(), -e.real()));
    if (a < 0.0) a += 2.0 * kPi;
    angles.push_back(a);
  }
  constexpr int kGrid = 256;
  for (int m = 0; m < kGrid; ++m) angles.push_back(2.0 * kPi * m / kGrid);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(), [](double a, double b) { return b - a < 1e-12; }),
               angles.end());

  const std::size_t nd = angles.size();
  std::vector<cplx> normal(nd);
  std::vector<double> support(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    normal[d] = std::polar(1.0, angles[d]);
    double best = -std::numeric_limits<double>::infinity();
    for (const cplx& z : v) best = std::max(best, normal[d].real() * z.real() + normal[d].imag() * z.imag());
    support[d] = best;
  }

  auto meet = [&](std::size_t a, std::size_t b) {
    // Solve n_a . x = h_a, n_b . x = h_b.
    const double det = cross(normal[a], normal[b]);
    const double x = (support[a] * normal[b].imag() - support[b] * normal[a].imag()) / det;
    const double y = (normal[a].real() * support[b] - normal[b].real() * support[a]) / det;
    return cplx(x, y);
  };
  auto tri_area = [&](std::size_t i, std::size_t j, std::size_t k) {
    const cplx p = meet(i, j), q = meet(j, k), r = meet(k, i);
    return 0.5 * std::abs(cross(q - p, r - p));
  };
  auto inflated = [&](std::size_t i, std::size_t j, std::size_t k) {
    Triangle t{{meet(i, j), meet(j, k), meet(k, i)}};
    if (cross(t.v[1] - t.v[0], t.v[2] - t.v[0]) < 0.0) std::swap(t.v[1], t.v[2]);
    const cplx c = t.centroid();
    for (cplx& z : t.v) z = c + (1.0 + inflate) * (z - c);
    return t;
  };

  constexpr double kMargin = 1e-9;
  double best_area = std::numeric_limits<double>::infinity();
  std::array<std::size_t, 3> best{};
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = i + 1; j < nd; ++j) {
      if (angles[j] - angles[i] >= kPi - kMargin) break;
      // Third normal must satisfy angles[i] + pi < a_k < angles[j] + pi.
      auto lo_it = std::upper_bound(angles.begin(), angles.end(), angles[i] + kPi + kMargin);
      auto hi_it = std::lower_bound(angles.begin(), angles.end(), angles[j] + kPi - kMargin);
      if (lo_it >= hi_it) continue;
      std::size_t lo = std::size_t(lo_it - angles.begin());
      std::size_t hi = std::size_t(hi_it - angles.begin()) - 1;
      // Area is unimodal in the third direction; ternary search then polish locally.
      while (!accept && hi - lo > 4) {
        const std::size_t m1 = lo + (hi - lo) / 3;
        const std::size_t m2 = hi - (hi - lo) / 3;
        if (tri_area(i, j, m1) <= tri_area(i, j, m2))
          hi = m2;
        else
          lo = m1;
      }
      for (std::size_t k = lo; k <= hi; ++k) {
        const double a = tri_area(i, j, k);
        if (a < best_area && (!accept || accept(inflated(i, j, k)))) {
          best_area = a;
          best = {i, j, k};
        }
      }
    }
  if (!std::isfinite(best_area)) return std::nullopt;
  return inflated(best[0], best[1], best[2]);
}

}  // namespace

Triangle min_enclosing_triangle(const Hull& hull, double inflate) {
  if (hull.vertices.empty()) throw InvalidArgument("min_enclosing_triangle: empty hull");
  const auto t = flush_search(hull, inflate, {});
  if (!t) throw NumericalError("min_enclosing_triangle: no bounded candidate");
  return *t;
}

Orientation orient_lower_half(const Triangle& t) {
  Orientation o;
  o.triangle = t;
  if (t.max_imag() <= 0.0) return o;
  if (t.min_imag() >= 0.0) {
    o.frame.conjugate = true;
    for (cplx& z : o.triangle.v) z = std::conj(z);
    std::swap(o.triangle.v[1], o.triangle.v[2]);
    return o;
  }
  const cplx c = t.centroid();
  const cplx ref = std::conj(c) / std::abs(c);
  double lo = kPi, hi = -kPi;
  for (const cplx& z : t.v) {
    if (z == 0.0) continue;
    const double a = std::arg(z * ref);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (c == 0.0 || hi - lo >= kPi) {
    o.half_plane_bounded = false;
    o.diagnostic = "spectrum not half-plane-bounded: origin inside the enclosing triangle";
    return o;
  }
  o.frame.rotation = std::polar(1.0, -0.5 * kPi - 0.5 * (lo + hi)) * ref;
  for (cplx& z : o.triangle.v) z = o.frame.rotation * z;
  return o;
}

std::optional<Triangle> apex_triangle(const Hull& input, cplx apex, double inflate, TriangleFit fit) {
  if (input.vertices.empty()) throw InvalidArgument("apex_triangle: empty hull");
  const Hull hull = input.degenerate || input.vertices.size() < 3 ? thicken(input, 1e-6) : input;
  std::vector<cplx> v;
  for (const cplx& z : hull.vertices) v.push_back(z - apex);

  // Angular extent of the hull seen from the apex: complement of the widest gap.
  std::vector<double> angles;
  for (const cplx& z : v) {
    if (z == 0.0) return std::nullopt;
    angles.push_back(std::arg(z));
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * kPi - angles.back();
  double start = angles.front();
  for (std::size_t i = 1; i < angles.size(); ++i)
    if (angles[i] - angles[i - 1] > gap) {
      gap = angles[i] - angles[i - 1];
      start = angles[i];
    }
  const double span = 2.0 * kPi - gap;
  if (span >= kPi) return std::nullopt;
  const double widen = std::min(0.5 * inflate * span, 0.25 * (kPi - span));
  const double a1 = start - widen;
  const double a2 = start + span + widen;
  const cplx r1 = std::polar(1.0, a1), r2 = std::polar(1.0, a2);

  // Third side: supporting line with normal angle phi, chosen to minimize the area.
  auto corners = [&](double phi) {
    const cplx n = std::polar(1.0, phi);
    double h = -std::numeric_limits<double>::infinity();
    for (const cplx& z : v) h = std::max(h, n.real() * z.real() + n.imag() * z.imag());
    const double d1 = n.real() * r1.real() + n.imag() * r1.imag();
    const double d2 = n.real() * r2.real() + n.imag() * r2.imag();
    return std::pair<cplx, cplx>{r1 * (h / d1), r2 * (h / d2)};
  };
  auto area = [&](double phi) {
    const auto [p, q] = corners(phi);
    if (fit == TriangleFit::diameter) return std::max({std::abs(p), std::abs(q), std::abs(p - q)});
    return 0.5 * std::abs(cross(p, q));
  };
  const double lo = a2 - 0.5 * kPi, hi = a1 + 0.5 * kPi;
  constexpr int kGrid = 256;
  double best = 0.5 * (lo + hi), best_area = area(best);
  for (int m = 1; m < kGrid; ++m) {
    const double phi = lo + (hi - lo) * m / kGrid;
    const double a = area(phi);
    if (a < best_area) {
      best_area = a;
      best = phi;
    }
  }
  double l = std::max(lo, best - (hi - lo) / kGrid), r = std::min(hi, best + (hi - lo) / kGrid);
  for (int it = 0; it < 60; ++it) {
    const double m1 = l + (r - l) / 3.0, m2 = r - (r - l) / 3.0;
    if (area(m1) <= area(m2))
      r = m2;
    else
      l = m1;
  }
  if (area(0.5 * (l + r)) < best_area) best = 0.5 * (l + r);
  const auto [p, q] = corners(best);
  if (!std::isfinite(p.real()) || !std::isfinite(q.real())) return std::nullopt;
  Triangle t{{apex, apex + (1.0 + inflate) * p, apex + (1.0 + inflate) * q}};
  if (cross(t.v[1] - t.v[0], t.v[2] - t.v[0]) < 0.0) std::swap(t.v[1], t.v[2]);
  return t;
}

std::optional<Triangle> anchored_triangle(const Hull& hull, double inflate, TriangleFit fit) {
  if (hull.vertices.empty()) throw InvalidArgument("anchored_triangle: empty hull");
  if (origin_span(hull.vertices) >= kPi) return std::nullopt;
  cplx nearest = hull.vertices.front();
  for (const cplx& z : hull.vertices)
    if (std::abs(z) < std::abs(nearest)) nearest = z;
  const double reach = std::abs(nearest);

  std::optional<Triangle> best;
  double best_area = std::numeric_limits<double>::infinity();
  constexpr int kDirections = 32;
  for (const double frac : {0.05, 0.1, 0.2, 0.35, 0.5}) {
    for (int m = 0; m < kDirections; ++m) {
      const cplx apex = nearest + std::polar(frac * reach, 2.0 * kPi * m / kDirections);
      const auto t = apex_triangle(hull, apex, inflate, fit);
      if (!t || origin_span(t->v) >= kPi) continue;
      const double size = fit == TriangleFit::diameter ? t->diameter() : t->area();
      if (size < best_area) {
        best_area = size;
        best = t;
      }
    }
  }
  return best;
}

double poly_max_on_boundary(const std::array<cplx, 3>& w, std::span<const cplx> samples) {
  // Plain real arithmetic: std::complex products carry inf/nan recovery that dominates here.
  const double w0r = w[0].real(), w0i = w[0].imag(), w1r = w[1].real(), w1i = w[1].imag();
  const double w2r = w[2].real(), w2i = w[2].imag();
  double m = 0.0;
  for (const cplx& z : samples) {
    const double zr = z.real(), zi = z.imag();
    const double ar = 1.0 - (w0r * zr - w0i * zi), ai = -(w0r * zi + w0i * zr);
    const double br = 1.0 - (w1r * zr - w1i * zi), bi = -(w1r * zi + w1i * zr);
    const double cr = 1.0 - (w2r * zr - w2i * zi), ci = -(w2r * zi + w2i * zr);
    const double abr = ar * br - ai * bi, abi = ar * bi + ai * br;
    const double pr = abr * cr - abi * ci, pi = abr * ci + abi * cr;
    m = std::max(m, pr * pr + pi * pi);
  }
  return std::sqrt(m);
}

std::vector<cplx> boundary_samples(std::span<const cplx> polygon, int per_edge) {
  std::vector<cplx> out;
  const std::size_t n = polygon.size();
  if (n == 1) return {polygon[0]};
  out.reserve(n * std::size_t(per_edge));
  for (std::size_t e = 0; e < n; ++e) {
    const cplx a = polygon[e], b = polygon[(e + 1) % n];
    for (int m = 0; m < per_edge; ++m) out.push_back(a + (b - a) * (double(m) / per_edge));
  }
  return out;
}

std::vector<cplx> perimeter_samples(std::span<const cplx> polygon, int total) {
  const std::size_t n = polygon.size();
  if (n == 1) return {polygon[0]};
  double perimeter = 0.0;
  for (std::size_t e = 0; e < n; ++e) perimeter += std::abs(polygon[(e + 1) % n] - polygon[e]);
  std::vector<cplx> out;
  for (std::size_t e = 0; e < n; ++e) {
    const cplx a = polygon[e], b = polygon[(e + 1) % n];
    const int count = std::max(1, int(std::lround(total * std::abs(b - a) / perimeter)));
    for (int m = 0; m < count; ++m) out.push_back(a + (b - a) * (double(m) / count));
  }
  return out;
}

double refined_boundary_max(const std::array<cplx, 3>& w, std::span<const cplx> polygon) {
  const std::size_t n = polygon.size();
  if (n == 1) return std::abs(poly3(w, polygon[0]));
  constexpr int kSteps = 256;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double best = 0.0;
  std::array<double, kSteps + 1> f{};
  for (std::size_t e = 0; e < n; ++e) {
    const cplx a = polygon[e], b = polygon[(e + 1) % n];
    auto g = [&](double t) { return std::abs(poly3(w, a + (b - a) * t)); };
    for (int m = 0; m <= kSteps; ++m) f[std::size_t(m)] = g(double(m) / kSteps);
    for (int m = 0; m <= kSteps; ++m) {
      best = std::max(best, f[std::size_t(m)]);
      const bool left_ok = m == 0 || f[std::size_t(m)] >= f[std::size_t(m - 1)];
      const bool right_ok = m == kSteps || f[std::size_t(m)] >= f[std::size_t(m + 1)];
      if (!left_ok || !right_ok) continue;
      double lo = std::max(0.0, double(m - 1) / kSteps);
      double hi = std::min(1.0, double(m + 1) / kSteps);
      double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
      double f1 = g(x1), f2 = g(x2);
      for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        if (f1 > f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - golden * (hi - lo);
          f1 = g(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + golden * (hi - lo);
          f2 = g(x2);
        }
      }
      best = std::max({best, f1, f2});
    }
  }
  return best;
}

}  // namespace helm
