#pragma once

#include <array>
#include <vector>

#include "helmholtz/field.hpp"

namespace helm {

enum class GridKind { physical, precond_grid, precond_csl };
enum class Ramp { linear, quadratic };

/// Interior node counts plus the complex length of every interval, per axis.
///
/// `base_x/base_y` are the spacings before any global rotation; `spacing_x/spacing_y`
/// are what the stencil sees (base times gamma for precond_grid). An axis with n
/// interior nodes has n+1 intervals, interval j joining node j and j+1 in the full
/// (boundary-inclusive) numbering.
struct ComplexGrid {
  int n_x = 0;
  int n_y = 0;
  std::vector<cplx> spacing_x;
  std::vector<cplx> spacing_y;
  std::vector<cplx> base_x;
  std::vector<cplx> base_y;
  GridKind kind = GridKind::physical;
  cplx gamma = 1.0;  // global rotation factor, 1 unless precond_grid
  double beta = 0.0;  // shift that produced gamma = sqrt(1 + i beta)

  /// Real node coordinate of interior node j along y, (j+1)/(n_y+1).
  double node_y(int j) const { return double(j + 1) / double(n_y + 1); }
};

/// Square unit-domain grid with optional complex-stretched layers on all four sides.
/// Interval j at depth m (m = 1 outermost) of a layer of width L gets
/// h(1 + i sigma_max * r(m')) with m' = L - m + 1 counted from the inner edge and r
/// the linear or quadratic ramp (m'/L or (m'/L)^2).
ComplexGrid build_stretched_grid(int n, int layer_width, double sigma_max, Ramp ramp = Ramp::quadratic);

/// Multiply every spacing of a physical grid by gamma = sqrt(1 + i beta).
ComplexGrid rotate_grid(const ComplexGrid& g, double beta);

/// Grid of every other node: spacings are summed pairwise. Requires odd n per axis.
ComplexGrid coarsen(const ComplexGrid& g);

/// Default layer width: n/8 rounded down, at least 4, never above n/4.
int default_layer_width(int n);

struct WavenumberSpec {
  enum class Kind { constant, wedge } kind = Kind::constant;
  double k0 = 0.0;
  // Wedge: bands[0] from y = 0 up to interfaces[0], bands[1] up to interfaces[1], bands[2] to y = 1.
  std::array<double, 3> bands{};
  std::array<double, 2> interfaces{1.0 / 3.0, 2.0 / 3.0};

  static WavenumberSpec constant(double k) {
    WavenumberSpec s;
    s.k0 = k;
    return s;
  }
  static WavenumberSpec wedge(double k_first, double k_mid, double k_last, double y1 = 1.0 / 3.0,
                              double y2 = 2.0 / 3.0) {
    WavenumberSpec s;
    s.kind = Kind::wedge;
    s.bands = {k_first, k_mid, k_last};
    s.interfaces = {y1, y2};
    return s;
  }
};

struct WavenumberField {
  int n_x = 0;
  int n_y = 0;
  std::vector<double> values;  // x fastest

  double operator()(int i, int j) const { return values[std::size_t(j) * n_x + i]; }
  double max() const;
};

/// Wedge rows belong to the band whose interval contains the node's y-coordinate,
/// lower end inclusive.
WavenumberField build_wavenumber_field(const WavenumberSpec& spec, const ComplexGrid& g);

/// Injection at coarse-coincident nodes (fine index 2j+1).
WavenumberField inject(const WavenumberField& fine);

}  // namespace helm
