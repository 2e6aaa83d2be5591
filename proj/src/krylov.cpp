#include "helmholtz/krylov.hpp"

#include <chrono>
#include <cmath>

namespace helm {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::zero_rhs:
      return "zero_rhs";
    case SolveStatus::max_iter:
      return "max_iter";
    case SolveStatus::stagnation:
      return "stagnation";
  }
  return "unknown";
}

namespace {

using Vec = std::vector<cplx>;

// Shared restarted Arnoldi driver. With `flexible`, z_j = P(v_j) is stored per step and the
// update uses Z; otherwise the update is P(V y) applied once per restart.
KrylovResult restarted_gmres(const LinearMap& apply_a, const LinearMap& precond, std::span<const cplx> b,
                             const KrylovOptions& opt, bool flexible) {
  if (!(opt.tol > 0.0)) throw InvalidArgument("gmres: tol must be > 0");
  if (opt.restart < 1) throw InvalidArgument("gmres: restart must be >= 1");
  if (opt.max_iter < 0) throw InvalidArgument("gmres: max_iter must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  KrylovResult res;
  res.x.assign(n, 0.0);
  SolveReport& rep = res.report;
  rep.residual_history.push_back(1.0);

  const double bnorm = norm2(b);
  auto finish = [&](SolveStatus s) {
    rep.status = s;
    rep.converged = s == SolveStatus::converged || s == SolveStatus::zero_rhs;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  };
  if (bnorm == 0.0) return finish(SolveStatus::zero_rhs);

  auto apply_p = [&](std::span<const cplx> in, std::span<cplx> out) {
    if (precond)
      precond(in, out);
    else
      std::copy(in.begin(), in.end(), out.begin());
  };

  const int m = opt.restart;
  Vec r(n), w(n), tmp(n);
  std::vector<Vec> v(std::size_t(m) + 1, Vec(n));
  std::vector<Vec> z(flexible ? std::size_t(m) : 0, Vec(n));
  std::vector<Vec> h(std::size_t(m), Vec(std::size_t(m) + 1));
  const std::size_t dim = std::size_t(m);
  Vec g(dim + 1), sn(dim);
  std::vector<double> cs(dim);

  double rel = 1.0;
  while (true) {
    apply_a(res.x, tmp);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - tmp[k];
    const double beta = norm2(r);
    rel = beta / bnorm;
    rep.final_residual = rel;
    if (rel <= opt.tol) return finish(SolveStatus::converged);
    if (rep.iterations >= opt.max_iter) return finish(SolveStatus::max_iter);
    const double cycle_start = rel;

    for (std::size_t k = 0; k < n; ++k) v[0][k] = r[k] / beta;
    std::fill(g.begin(), g.end(), cplx(0.0));
    g[0] = beta;
    int j = 0;
    bool breakdown = false;
    for (; j < m && rep.iterations < opt.max_iter; ++j) {
      if (flexible) {
        apply_p(v[std::size_t(j)], z[std::size_t(j)]);
        apply_a(z[std::size_t(j)], w);
      } else {
        apply_p(v[std::size_t(j)], tmp);
        apply_a(tmp, w);
      }
      Vec& col = h[std::size_t(j)];
      std::fill(col.begin(), col.end(), cplx(0.0));
      for (int i = 0; i <= j; ++i) {
        const cplx hij = dot(v[std::size_t(i)], w);
        col[std::size_t(i)] = hij;
        axpy(-hij, v[std::size_t(i)], w);
      }
      const double hnext = norm2(w);
      col[std::size_t(j) + 1] = hnext;
      for (int i = 0; i < j; ++i) {
        const cplx a = col[std::size_t(i)], c = col[std::size_t(i) + 1];
        col[std::size_t(i)] = cs[std::size_t(i)] * a + sn[std::size_t(i)] * c;
        col[std::size_t(i) + 1] = -std::conj(sn[std::size_t(i)]) * a + cs[std::size_t(i)] * c;
      }
      const cplx a = col[std::size_t(j)];
      const double denom = std::hypot(std::abs(a), hnext);
      if (denom == 0.0) {  // A P v_j = 0: singular direction, keep what we have
        breakdown = true;
        break;
      }
      cs[std::size_t(j)] = std::abs(a) / denom;
      sn[std::size_t(j)] = (std::abs(a) == 0.0 ? cplx(1.0) : a / std::abs(a)) * hnext / denom;
      col[std::size_t(j)] = cs[std::size_t(j)] * a + sn[std::size_t(j)] * hnext;
      col[std::size_t(j) + 1] = 0.0;
      g[std::size_t(j) + 1] = -std::conj(sn[std::size_t(j)]) * g[std::size_t(j)];
      g[std::size_t(j)] = cs[std::size_t(j)] * g[std::size_t(j)];

      ++rep.iterations;
      rel = std::abs(g[std::size_t(j) + 1]) / bnorm;
      rep.residual_history.push_back(rel);
      if (hnext <= 1e-14 * beta) {
        breakdown = true;
        ++j;
        break;
      }
      for (std::size_t k = 0; k < n; ++k) v[std::size_t(j) + 1][k] = w[k] / hnext;
      if (rel <= opt.tol) {
        ++j;
        break;
      }
    }

    Vec y(static_cast<std::size_t>(j));
    for (int i = j - 1; i >= 0; --i) {
      cplx s = g[std::size_t(i)];
      for (int k = i + 1; k < j; ++k) s -= h[std::size_t(k)][std::size_t(i)] * y[std::size_t(k)];
      y[std::size_t(i)] = s / h[std::size_t(i)][std::size_t(i)];
    }
    if (flexible) {
      for (int i = 0; i < j; ++i) axpy(y[std::size_t(i)], z[std::size_t(i)], res.x);
    } else {
      std::fill(w.begin(), w.end(), cplx(0.0));
      for (int i = 0; i < j; ++i) axpy(y[std::size_t(i)], v[std::size_t(i)], w);
      apply_p(w, tmp);
      axpy(1.0, tmp, res.x);
    }

    // Explicit residual check happens at the top of the loop.
    if (!breakdown && rel > opt.tol && j == m && rel >= cycle_start) {
      apply_a(res.x, tmp);
      for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - tmp[k];
      rep.final_residual = norm2(r) / bnorm;
      if (rep.final_residual <= opt.tol) return finish(SolveStatus::converged);
      return finish(SolveStatus::stagnation);
    }
  }
}

}  // namespace

KrylovResult fgmres(const LinearMap& apply_a, const LinearMap& precondition, std::span<const cplx> b,
                    const KrylovOptions& opt) {
  return restarted_gmres(apply_a, precondition, b, opt, true);
}

KrylovResult gmres_baseline(const LinearMap& apply_a, std::span<const cplx> b, const KrylovOptions& opt,
                            const LinearMap& right_precondition) {
  return restarted_gmres(apply_a, right_precondition, b, opt, false);
}

}  // namespace helm
