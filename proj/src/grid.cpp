#include "helmholtz/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace helm {

namespace {

std::vector<cplx> stretched_axis(int n, int layer_width, double sigma_max, Ramp ramp) {
  const double h = 1.0 / double(n + 1);
  std::vector<cplx> s(std::size_t(n) + 1, cplx(h, 0.0));
  for (int m = 1; m <= layer_width; ++m) {
    // m = 1 is the outermost interval; r counts from the inner edge of the layer.
    const double r = double(layer_width - m + 1) / double(layer_width);
    const double sigma = sigma_max * (ramp == Ramp::quadratic ? r * r : r);
    const cplx value = h * cplx(1.0, sigma);
    s[std::size_t(m - 1)] = value;
    s[std::size_t(n + 1 - m)] = value;
  }
  return s;
}

}  // namespace

int default_layer_width(int n) { return std::min(std::max(n / 8, 4), n / 4); }

ComplexGrid build_stretched_grid(int n, int layer_width, double sigma_max, Ramp ramp) {
  if (n < 3) throw InvalidArgument("build_stretched_grid: n must be >= 3, got " + std::to_string(n));
  // n + 1 intervals per axis; each layer may take at most a quarter of them.
  if (layer_width < 0 || 4 * layer_width > n + 1)
    throw InvalidArgument("build_stretched_grid: layer_width " + std::to_string(layer_width) +
                          " outside [0, (n+1)/4]; layers would overlap");
  if (!(sigma_max >= 0.0)) throw InvalidArgument("build_stretched_grid: sigma_max must be >= 0");

  ComplexGrid g;
  g.n_x = g.n_y = n;
  g.base_x = stretched_axis(n, layer_width, sigma_max, ramp);
  g.base_y = g.base_x;
  g.spacing_x = g.base_x;
  g.spacing_y = g.base_y;
  g.kind = GridKind::physical;
  return g;
}

ComplexGrid rotate_grid(const ComplexGrid& g, double beta) {
  if (g.kind != GridKind::physical) throw InvalidArgument("rotate_grid: input grid must be physical");
  if (!(beta > 0.0)) throw InvalidArgument("rotate_grid: beta must be > 0");
  ComplexGrid r = g;
  r.kind = GridKind::precond_grid;
  r.beta = beta;
  r.gamma = std::sqrt(cplx(1.0, beta));
  for (cplx& s : r.spacing_x) s *= r.gamma;
  for (cplx& s : r.spacing_y) s *= r.gamma;
  return r;
}

ComplexGrid coarsen(const ComplexGrid& g) {
  if (g.n_x % 2 == 0 || g.n_y % 2 == 0 || g.n_x < 3 || g.n_y < 3)
    throw InvalidArgument("coarsen: need odd n >= 3 per axis");
  auto pair_sum = [](const std::vector<cplx>& s) {
    std::vector<cplx> c(s.size() / 2);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = s[2 * j] + s[2 * j + 1];
    return c;
  };
  ComplexGrid c = g;
  c.n_x = (g.n_x - 1) / 2;
  c.n_y = (g.n_y - 1) / 2;
  c.spacing_x = pair_sum(g.spacing_x);
  c.spacing_y = pair_sum(g.spacing_y);
  c.base_x = pair_sum(g.base_x);
  c.base_y = pair_sum(g.base_y);
  return c;
}

double WavenumberField::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

WavenumberField build_wavenumber_field(const WavenumberSpec& spec, const ComplexGrid& g) {
  WavenumberField f;
  f.n_x = g.n_x;
  f.n_y = g.n_y;
  f.values.resize(std::size_t(g.n_x) * g.n_y);
  if (spec.kind == WavenumberSpec::Kind::constant) {
    if (!(spec.k0 > 0.0)) throw InvalidArgument("build_wavenumber_field: k must be > 0");
    std::fill(f.values.begin(), f.values.end(), spec.k0);
    return f;
  }
  for (double k : spec.bands)
    if (!(k > 0.0)) throw InvalidArgument("build_wavenumber_field: wedge wave numbers must be > 0");
  const auto [y1, y2] = spec.interfaces;
  if (!(0.0 < y1 && y1 < y2 && y2 < 1.0))
    throw InvalidArgument("build_wavenumber_field: wedge interfaces must satisfy 0 < y1 < y2 < 1");
  constexpr double tie = 1e-12;
  for (int j = 0; j < g.n_y; ++j) {
    const double y = g.node_y(j);
    const int band = (y + tie >= y2) ? 2 : (y + tie >= y1) ? 1 : 0;
    for (int i = 0; i < g.n_x; ++i) f.values[std::size_t(j) * g.n_x + i] = spec.bands[std::size_t(band)];
  }
  return f;
}

WavenumberField inject(const WavenumberField& fine) {
  WavenumberField c;
  c.n_x = (fine.n_x - 1) / 2;
  c.n_y = (fine.n_y - 1) / 2;
  c.values.resize(std::size_t(c.n_x) * c.n_y);
  for (int j = 0; j < c.n_y; ++j)
    for (int i = 0; i < c.n_x; ++i) c.values[std::size_t(j) * c.n_x + i] = fine(2 * i + 1, 2 * j + 1);
  return c;
}

}  // namespace helm
