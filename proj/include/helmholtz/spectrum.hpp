#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helmholtz/field.hpp"
#include "helmholtz/operator.hpp"

namespace helm {

/// Jacobi-normalized frozen-coefficient symbol values mu = lambda / d of one level.
struct SymbolSampleSet {
  std::vector<cplx> points;
  std::vector<std::uint8_t> high_frequency;  // 1 where max(theta_x, theta_y) >= pi/2
  int theta_count = 0;
  int level = 0;

  std::vector<cplx> hf_points() const;
};

/// Sample mu over theta in (0, pi]^2 for every frozen (h_x, h_y, k) triple occurring on the
/// level: each spacing on its own, plus the spacing pairs meeting at a node. A complex spacing
/// paired with a different one is sampled at theta >= pi/2 only.
/// Throws NumericalError ("resonant diagonal") if some local diagonal vanishes.
SymbolSampleSet symbol_samples(const StencilOperator& level, int theta_count = 64, int level_index = 0);

struct Hull {
  std::vector<cplx> vertices;  // counterclockwise, collinear points removed
  bool degenerate = false;     // fewer than three non-collinear points
};

Hull convex_hull(std::span<const cplx> points);

/// Replace a degenerate hull (point or segment) by a thin rectangle of half-width rel * diam.
Hull thicken(const Hull& hull, double rel = 1e-6);

struct Triangle {
  std::array<cplx, 3> v{};

  double area() const;
  cplx centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }
  double diameter() const;
  /// True if z is inside or within `slack` of the closed triangle.
  bool contains(cplx z, double slack = 1e-10) const;
  double max_imag() const;
  double min_imag() const;
};

/// Smallest triangle found whose sides are supporting lines of the hull, searched over
/// the hull's edge directions plus a uniform direction grid, then scaled by (1 + inflate)
/// about its centroid. Degenerate hulls are thickened first.
Triangle min_enclosing_triangle(const Hull& hull, double inflate = 0.05);

/// What the free side of an apex triangle minimizes.
enum class TriangleFit { area, diameter };

/// Triangle with one vertex at `apex` whose two sides through it bound the hull's angular
/// extent seen from the apex (widened slightly), closed by the supporting line minimizing
/// `fit` and scaled by (1 + inflate) about the apex. Empty when the hull subtends pi or more.
std::optional<Triangle> apex_triangle(const Hull& hull, cplx apex = 0.0, double inflate = 0.05,
                                      TriangleFit fit = TriangleFit::area);

/// Smallest (by `fit`) apex triangle with its apex just outside the hull vertex nearest the origin and
/// the origin outside. Hugs the low-frequency end of the spectrum, where p(0) = 1 makes the
/// stability constraint tight. Empty when no such triangle exists.
std::optional<Triangle> anchored_triangle(const Hull& hull, double inflate = 0.05,
                                         TriangleFit fit = TriangleFit::area);

/// Map between symbol coordinates mu and the oriented coordinates z used to design the
/// polynomial: z = rotation * (conjugate ? conj(mu) : mu).
struct Frame {
  bool conjugate = false;
  cplx rotation = 1.0;

  cplx to_oriented(cplx mu) const { return rotation * (conjugate ? std::conj(mu) : mu); }
  /// Weight in mu coordinates with the same |p| as weight w in oriented coordinates.
  cplx weight_to_symbol(cplx w) const { return conjugate ? std::conj(w * rotation) : w * rotation; }
};

struct Orientation {
  Triangle triangle;
  Frame frame;
  bool half_plane_bounded = true;
  std::string diagnostic;  // empty unless the triangle cannot be placed in a half-plane
};

/// Put the triangle in the closed lower half-plane. Unchanged if it already is; conjugated if
/// it lies in the upper half-plane; otherwise rotated so its angular span about the origin
/// is centred on -i. Fails (diagnostic, not exception) only when the origin is inside.
Orientation orient_lower_half(const Triangle& t);

struct SmootherWeights {
  std::array<cplx, 3> w{};
  double achieved_stability = 1.0;  // max |p| over the triangle boundary
  double achieved_smoothing = 1.0;  // max |p| over the high-frequency hull boundary
};

inline cplx poly3(const std::array<cplx, 3>& w, cplx z) {
  return (1.0 - w[0] * z) * (1.0 - w[1] * z) * (1.0 - w[2] * z);
}

double poly_max_on_boundary(const std::array<cplx, 3>& w, std::span<const cplx> samples);

/// `per_edge` evenly spaced points on every edge of the closed polygon (vertices included).
std::vector<cplx> boundary_samples(std::span<const cplx> polygon, int per_edge);
/// `total` points spread over the polygon perimeter by arc length, plus every vertex.
std::vector<cplx> perimeter_samples(std::span<const cplx> polygon, int total);
/// Max |p| on the polygon boundary with each local maximum refined by golden-section search.
double refined_boundary_max(const std::array<cplx, 3>& w, std::span<const cplx> polygon);

struct OptimizerOptions {
  int budget = 20000;  // objective evaluations over all restarts
  int restarts = 8;
  int boundary_samples = 256;
};

class UnstableLevel : public NumericalError {
 public:
  UnstableLevel(const std::string& what, SmootherWeights best) : NumericalError(what), best_(best) {}
  const SmootherWeights& best() const { return best_; }

 private:
  SmootherWeights best_;
};

/// Minimize max |p| on the high-frequency hull subject to max |p| <= 1 on the triangle,
/// p(z) = (1 - w1 z)(1 - w2 z)(1 - w3 z). Both regions are in the same coordinates.
SmootherWeights optimize_weights(const Triangle& t, std::span<const cplx> hf_hull,
                                 const OptimizerOptions& opt = {});

struct SpectrumOptions {
  int theta_count = 64;
  double inflate = 0.05;
  double thicken = 1e-6;
  OptimizerOptions optimizer{};
};

/// Everything the spectral design produces for one level.
struct LevelSpectrum {
  int level = 0;
  SymbolSampleSet samples;
  Frame frame;
  Triangle triangle;  // oriented, inflated
  Hull hf_hull;       // oriented coordinates
  bool half_plane_bounded = true;
  std::string diagnostic;
  SmootherWeights oriented_weights;  // weights acting on z
  SmootherWeights weights;           // weights acting on D^-1 M, for the smoother
};

LevelSpectrum analyze_level(const StencilOperator& level, int level_index, const SpectrumOptions& opt = {});

}  // namespace helm
