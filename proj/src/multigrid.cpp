#include "helmholtz/multigrid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace helm {

Field restrict_full_weighting(const Field& fine) {
  if (fine.nx() % 2 == 0 || fine.ny() % 2 == 0 || fine.nx() < 3 || fine.ny() < 3)
    throw InvalidArgument("restrict: fine grid needs odd n >= 3 per axis");
  const int nx = fine.nx(), ny = fine.ny();
  auto at = [&](int i, int j) { return (i < 0 || j < 0 || i >= nx || j >= ny) ? cplx(0.0) : fine(i, j); };
  Field c((nx - 1) / 2, (ny - 1) / 2);
  for (int jc = 0; jc < c.ny(); ++jc)
    for (int ic = 0; ic < c.nx(); ++ic) {
      const int i = 2 * ic + 1, j = 2 * jc + 1;
      c(ic, jc) = 0.25 * at(i, j) + 0.125 * (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1)) +
                  0.0625 * (at(i - 1, j - 1) + at(i + 1, j - 1) + at(i - 1, j + 1) + at(i + 1, j + 1));
    }
  return c;
}

Field prolong_bilinear(const Field& coarse) {
  const int ncx = coarse.nx(), ncy = coarse.ny();
  auto at = [&](int i, int j) { return (i < 0 || j < 0 || i >= ncx || j >= ncy) ? cplx(0.0) : coarse(i, j); };
  Field f(2 * ncx + 1, 2 * ncy + 1);
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      // Fine node i sits at coarse coordinate (i - 1) / 2.
      const int i0 = (i - 1) >> 1, j0 = (j - 1) >> 1;
      const bool ix = i % 2 == 1, jy = j % 2 == 1;
      if (ix && jy)
        f(i, j) = at(i0, j0);
      else if (ix)
        f(i, j) = 0.5 * (at(i0, j0) + at(i0, j0 + 1));
      else if (jy)
        f(i, j) = 0.5 * (at(i0, j0) + at(i0 + 1, j0));
      else
        f(i, j) = 0.25 * (at(i0, j0) + at(i0 + 1, j0) + at(i0, j0 + 1) + at(i0 + 1, j0 + 1));
    }
  return f;
}

struct DenseLU::Impl {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
};

DenseLU::DenseLU(const DenseMatrix& m) : n_(m.n), impl_(std::make_unique<Impl>()) {
  Eigen::MatrixXcd a(m.n, m.n);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) a(r, c) = m(r, c);
  impl_->lu.compute(a);
}
DenseLU::~DenseLU() = default;
DenseLU::DenseLU(DenseLU&&) noexcept = default;
DenseLU& DenseLU::operator=(DenseLU&&) noexcept = default;

std::vector<cplx> DenseLU::solve(std::span<const cplx> rhs) const {
  if (rhs.size() != std::size_t(n_)) throw InvalidArgument("DenseLU::solve: size mismatch");
  Eigen::Map<const Eigen::VectorXcd> b(rhs.data(), n_);
  Eigen::VectorXcd x = impl_->lu.solve(b);
  return {x.data(), x.data() + n_};
}

std::vector<cplx> coarse_solve(const DenseLU& factors, std::span<const cplx> rhs) { return factors.solve(rhs); }

Hierarchy build_hierarchy(const StencilOperator& fine, SmootherKind smoother, int max_levels,
                          const HierarchyOptions& opt) {
  if (max_levels < 1) throw InvalidArgument("build_hierarchy: max_levels must be >= 1");
  Hierarchy h;
  h.smoother = smoother;
  h.levels.push_back(Level{fine, std::nullopt, std::nullopt});
  while (int(h.levels.size()) < max_levels) {
    const StencilOperator& op = h.levels.back().op;
    if (std::max(op.nx(), op.ny()) <= opt.coarsest_max) break;
    if (op.nx() % 2 == 0 || op.ny() % 2 == 0) break;
    ComplexGrid cg = coarsen(op.grid());
    if (op.mode() == OperatorMode::precond_csl) cg.kind = GridKind::physical;
    h.levels.push_back(Level{StencilOperator(std::move(cg), inject(op.k_field()), op.mode(), op.csl_beta()),
                             std::nullopt, std::nullopt});
  }
  const StencilOperator& last = h.levels.back().op;
  if (last.size() > std::size_t(kDenseCap))
    throw InvalidArgument("build_hierarchy: insufficient size for the requested levels; coarsest grid " +
                          std::to_string(last.nx()) + "x" + std::to_string(last.ny()) +
                          " exceeds the dense solve cap (use n = 2^m - 1 or more levels)");
  h.coarsest = std::make_unique<DenseLU>(assemble_dense(last));

  const bool design = smoother.type == SmootherKind::Type::poly3 || opt.design_weights;
  if (design)
    for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
      LevelSpectrum ls = analyze_level(h.levels[l].op, int(l), opt.spectrum);
      h.levels[l].weights = ls.weights;
      if (!opt.keep_samples) ls.samples = {};
      h.levels[l].spectrum = std::move(ls);
    }
  return h;
}

VCycle::VCycle(const Hierarchy& h, int nu_pre, int nu_post) : h_(h), nu_pre_(nu_pre), nu_post_(nu_post) {
  if (nu_pre < 0 || nu_post < 0) throw InvalidArgument("VCycle: smoothing counts must be >= 0");
  for (const Level& l : h_.levels) {
    b_.emplace_back(l.op.nx(), l.op.ny());
    u_.emplace_back(l.op.nx(), l.op.ny());
    r_.emplace_back(l.op.nx(), l.op.ny());
    scratch_.emplace_back(l.op.nx(), l.op.ny());
  }
  if (h_.smoother.type == SmootherKind::Type::poly3)
    for (std::size_t l = 0; l + 1 < h_.levels.size(); ++l)
      if (!h_.levels[l].weights) throw InvalidArgument("VCycle: poly3 smoother needs weights on every level");
}

void VCycle::smooth(std::size_t level, int count) {
  const Level& l = h_.levels[level];
  for (int s = 0; s < count; ++s) {
    if (h_.smoother.type == SmootherKind::Type::poly3)
      poly3_smooth(l.op, u_[level], b_[level], *l.weights, scratch_[level]);
    else
      gmres_smooth(l.op, u_[level], b_[level], h_.smoother.m);
  }
}

void VCycle::cycle(std::size_t level, CycleDiagnostics* diag) {
  const Level& l = h_.levels[level];
  if (level + 1 == h_.levels.size()) {
    const std::vector<cplx> x = coarse_solve(*h_.coarsest, b_[level].values());
    std::copy(x.begin(), x.end(), u_[level].values().begin());
    return;
  }
  if (diag) {
    l.op.residual(b_[level].values(), u_[level].values(), r_[level].values());
    diag->pre_residual[level] = norm2(r_[level]);
  }
  smooth(level, nu_pre_);
  l.op.residual(b_[level].values(), u_[level].values(), r_[level].values());
  const double before = norm2(r_[level]);

  b_[level + 1] = restrict_full_weighting(r_[level]);
  u_[level + 1].fill(0.0);
  cycle(level + 1, diag);
  const Field correction = prolong_bilinear(u_[level + 1]);
  axpy(1.0, correction.values(), u_[level].values());

  if (diag) {
    l.op.residual(b_[level].values(), u_[level].values(), r_[level].values());
    diag->cgc_ratio[level] = before > 0.0 ? norm2(r_[level]) / before : 0.0;
  }
  smooth(level, nu_post_);
  l.op.residual(b_[level].values(), u_[level].values(), r_[level].values());
  const double after = norm2(r_[level]);
  if (diag) diag->post_residual[level] = after;
  if (!std::isfinite(after) || !std::isfinite(before))
    throw NumericalError("v_cycle: divergence detected on level " + std::to_string(level));
}

void VCycle::run(const Field& b, Field& u, CycleDiagnostics* diag) {
  require_same_shape(b, u, "VCycle::run");
  require_same_shape(b, b_[0], "VCycle::run");
  if (diag) {
    const std::size_t nl = h_.levels.size() - 1;
    diag->pre_residual.assign(nl, 0.0);
    diag->post_residual.assign(nl, 0.0);
    diag->cgc_ratio.assign(nl, 0.0);
  }
  b_[0] = b;
  u_[0] = u;
  cycle(0, diag);
  u = u_[0];
}

void VCycle::precondition(std::span<const cplx> r, std::span<cplx> z, CycleDiagnostics* diag) {
  Field b(b_[0].nx(), b_[0].ny());
  std::copy(r.begin(), r.end(), b.values().begin());
  Field u(b.nx(), b.ny());
  run(b, u, diag);
  std::copy(u.values().begin(), u.values().end(), z.begin());
}

}  // namespace helm
