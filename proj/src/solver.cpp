#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "incompat/cone_program.hpp"

// Homogeneous self-dual embedding solved by primal-dual path following with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector, dense normal
// equations via Cholesky. Model:
//
//   A x - b tau           = 0
//   c tau - A'y - s       = 0
//   b'y - c'x - kappa     = 0,   x,s in K, tau,kappa >= 0
//
// Any exactly feasible point is complementary; the interior-point iteration
// drives mu -> 0. tau dominant => optimal for min c'x s.t. Ax=b, x in K;
// kappa dominant => an infeasibility certificate.

namespace incompat {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

int svec_len(int k) { return k * (k + 1) / 2; }

void svec_into(const MatrixXd& m, double* out) {
  const double rt2 = std::sqrt(2.0);
  int idx = 0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i <= j; ++i) out[idx++] = (i == j) ? m(i, j) : rt2 * m(i, j);
}

MatrixXd smat(const double* v, int k) {
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  MatrixXd m(k, k);
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (i == j) {
        m(i, j) = v[idx];
      } else {
        m(i, j) = inv_rt2 * v[idx];
        m(j, i) = m(i, j);
      }
      ++idx;
    }
  }
  return m;
}

struct BlockMap {
  BlockKind kind = BlockKind::Nonneg;
  bool embedded = false;
  int dim_orig = 1;  // complex dimension in the caller's program
  int k = 1;         // real symmetric size after realification (psd only)
  int off = 0;       // column offset into x
  int len = 1;       // number of columns (svec length / 1 / 2)
};

struct PsdView {
  int k;
  int off;
  int len;
  std::vector<int> rows;  // constraint rows with a nonzero slice
};

struct Lowered {
  std::vector<BlockMap> map;
  std::vector<PsdView> psd;
  std::vector<int> scalar_cols;
  int N = 0;
  int P = 0;
  MatrixXd A;
  VectorXd b, c;
  double nu = 0;
  double sense_factor = 1.0;  // +1 min, -1 max
};

Lowered lower(const ConeProgram& user, const ConeProgram& realp, const SolverSettings& st) {
  Lowered L;
  L.sense_factor = realp.sense == Sense::Maximize ? -1.0 : 1.0;
  const int nb = static_cast<int>(realp.blocks.size());
  L.map.resize(nb);
  int off = 0;
  for (int b = 0; b < nb; ++b) {
    BlockMap bm;
    bm.kind = realp.blocks[b].kind;
    bm.dim_orig = user.blocks[b].dim;
    if (bm.kind == BlockKind::Psd) {
      bm.k = realp.blocks[b].dim;
      bm.embedded = bm.k != bm.dim_orig;
      bm.off = off;
      bm.len = svec_len(bm.k);
    } else {
      bm.off = off;
      bm.len = bm.kind == BlockKind::Free ? 2 : 1;
    }
    off += bm.len;
    L.map[b] = bm;
  }
  L.N = off;
  if (L.N > st.dim_cap) {
    throw ValidationError("solve: total real dimension " + std::to_string(L.N) +
                          " exceeds cap " + std::to_string(st.dim_cap));
  }
  L.P = static_cast<int>(realp.constraints.size());
  if (L.P < 1) throw ValidationError("solve: program has no constraints");

  L.A = MatrixXd::Zero(L.P, L.N);
  L.b = VectorXd::Zero(L.P);
  L.c = VectorXd::Zero(L.N);
  for (int r = 0; r < L.P; ++r) {
    const LinearRow& row = realp.constraints[r];
    L.b(r) = row.rhs;
    for (const auto& [blk, coeff] : row.matrix_terms) {
      const BlockMap& bm = L.map[blk];
      VectorXd seg(bm.len);
      svec_into(coeff.entries().real(), seg.data());
      L.A.block(r, bm.off, 1, bm.len) += seg.transpose();
    }
    for (const auto& [blk, coeff] : row.scalar_terms) {
      const BlockMap& bm = L.map[blk];
      L.A(r, bm.off) += coeff;
      if (bm.kind == BlockKind::Free) L.A(r, bm.off + 1) -= coeff;
    }
  }
  for (const auto& [blk, coeff] : realp.objective.matrix_terms) {
    const BlockMap& bm = L.map[blk];
    VectorXd seg(bm.len);
    svec_into(coeff.entries().real(), seg.data());
    L.c.segment(bm.off, bm.len) += seg;
  }
  for (const auto& [blk, coeff] : realp.objective.scalar_terms) {
    const BlockMap& bm = L.map[blk];
    L.c(bm.off) += coeff;
    if (bm.kind == BlockKind::Free) L.c(bm.off + 1) -= coeff;
  }
  if (L.sense_factor < 0) L.c = -L.c;

  for (int b = 0; b < nb; ++b) {
    const BlockMap& bm = L.map[b];
    if (bm.kind == BlockKind::Psd) {
      PsdView v{bm.k, bm.off, bm.len, {}};
      for (int r = 0; r < L.P; ++r)
        if (L.A.block(r, bm.off, 1, bm.len).cwiseAbs().maxCoeff() > 0) v.rows.push_back(r);
      L.psd.push_back(v);
      L.nu += bm.k;
    } else {
      for (int j = 0; j < bm.len; ++j) L.scalar_cols.push_back(bm.off + j);
      L.nu += bm.len;
    }
  }
  return L;
}

struct PsdScale {
  MatrixXd G, Gi;
  VectorXd lam;
};

struct Scaling {
  std::vector<PsdScale> psd;
  VectorXd w, lam;  // per scalar col (aligned with L.scalar_cols)
  bool ok = false;
};

Scaling compute_scaling(const Lowered& L, const VectorXd& x, const VectorXd& s) {
  Scaling sc;
  sc.psd.reserve(L.psd.size());
  for (const auto& v : L.psd) {
    MatrixXd X = smat(x.data() + v.off, v.k);
    MatrixXd S = smat(s.data() + v.off, v.k);
    Eigen::LLT<MatrixXd> lx(X), ls(S);
    if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return sc;
    MatrixXd Lx = lx.matrixL();
    MatrixXd Ls = ls.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(Ls.transpose() * Lx,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    VectorXd lam = svd.singularValues().cwiseMax(1e-150);
    VectorXd li = lam.cwiseSqrt().cwiseInverse();
    PsdScale ps;
    ps.G = Lx * svd.matrixV() * li.asDiagonal();
    ps.Gi = li.asDiagonal() * svd.matrixU().transpose() * Ls.transpose();
    ps.lam = lam;
    sc.psd.push_back(std::move(ps));
  }
  const int ns = static_cast<int>(L.scalar_cols.size());
  sc.w.resize(ns);
  sc.lam.resize(ns);
  for (int i = 0; i < ns; ++i) {
    const double xi = x(L.scalar_cols[i]), si = s(L.scalar_cols[i]);
    if (xi <= 0 || si <= 0) return sc;
    sc.w(i) = std::sqrt(xi / si);
    sc.lam(i) = std::sqrt(xi * si);
  }
  sc.ok = true;
  return sc;
}

// v -> svec-space image of G' smat(v) G per block, w .* v on scalars.
VectorXd apply_hf_t(const Lowered& L, const Scaling& sc, const VectorXd& v) {
  VectorXd out = VectorXd::Zero(L.N);
  for (size_t p = 0; p < L.psd.size(); ++p) {
    const auto& blk = L.psd[p];
    const auto& ps = sc.psd[p];
    MatrixXd t = ps.G.transpose() * smat(v.data() + blk.off, blk.k) * ps.G;
    svec_into(t, out.data() + blk.off);
  }
  for (size_t i = 0; i < L.scalar_cols.size(); ++i)
    out(L.scalar_cols[i]) = sc.w(i) * v(L.scalar_cols[i]);
  return out;
}

VectorXd apply_hf(const Lowered& L, const Scaling& sc, const VectorXd& v) {
  VectorXd out = VectorXd::Zero(L.N);
  for (size_t p = 0; p < L.psd.size(); ++p) {
    const auto& blk = L.psd[p];
    const auto& ps = sc.psd[p];
    MatrixXd t = ps.G * smat(v.data() + blk.off, blk.k) * ps.G.transpose();
    svec_into(t, out.data() + blk.off);
  }
  for (size_t i = 0; i < L.scalar_cols.size(); ++i)
    out(L.scalar_cols[i]) = sc.w(i) * v(L.scalar_cols[i]);
  return out;
}

double min_eig_sym(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// largest alpha in (0, cap] keeping x + alpha dx in the cone
double cone_step(const Lowered& L, const Scaling& sc, const VectorXd& x, const VectorXd& dx,
                 bool x_side) {
  double a = kInf;
  for (size_t p = 0; p < L.psd.size(); ++p) {
    const auto& blk = L.psd[p];
    const auto& ps = sc.psd[p];
    MatrixXd dhat = x_side
                        ? MatrixXd(ps.Gi * smat(dx.data() + blk.off, blk.k) * ps.Gi.transpose())
                        : MatrixXd(ps.G.transpose() * smat(dx.data() + blk.off, blk.k) * ps.G);
    VectorXd lsq = ps.lam.cwiseSqrt();
    for (int i = 0; i < blk.k; ++i)
      for (int j = 0; j < blk.k; ++j) dhat(i, j) /= lsq(i) * lsq(j);
    const double m = min_eig_sym(dhat);
    if (m < 0) a = std::min(a, -1.0 / m);
  }
  for (size_t i = 0; i < L.scalar_cols.size(); ++i) {
    const int col = L.scalar_cols[i];
    if (dx(col) < 0) a = std::min(a, -x(col) / dx(col));
  }
  return a;
}

struct Direction {
  VectorXd dx, dy, ds;
  double dtau = 0, dkappa = 0;
  bool ok = false;
};

struct IterationWork {
  MatrixXd Atil;
  Eigen::LDLT<MatrixXd> fact;
  MatrixXd Mmat;
  VectorXd hfc;
  VectorXd u;
  VectorXd g2;
  double cWc = 0;
};

VectorXd solve_refined(const IterationWork& w, const VectorXd& h) {
  VectorXd g = w.fact.solve(h);
  VectorXd r = h - w.Mmat * g;
  if (r.lpNorm<Eigen::Infinity>() > 1e-14 * (1.0 + h.lpNorm<Eigen::Infinity>()))
    g += w.fact.solve(r);
  return g;
}

Direction solve_direction(const Lowered& L, const Scaling& sc, const IterationWork& w,
                          double tau, double kappa, const VectorXd& rx, const VectorXd& ry,
                          double rzp, const std::vector<MatrixXd>& rc_psd,
                          const VectorXd& rc_nn, double rtk) {
  Direction d;
  VectorXd zeta = VectorXd::Zero(L.N);
  for (size_t p = 0; p < L.psd.size(); ++p) {
    const auto& blk = L.psd[p];
    const auto& ps = sc.psd[p];
    MatrixXd ls(blk.k, blk.k);
    for (int i = 0; i < blk.k; ++i)
      for (int j = 0; j < blk.k; ++j) ls(i, j) = 2.0 * rc_psd[p](i, j) / (ps.lam(i) + ps.lam(j));
    MatrixXd z = ps.G * ls * ps.G.transpose();
    svec_into(z, zeta.data() + blk.off);
  }
  for (size_t i = 0; i < L.scalar_cols.size(); ++i)
    zeta(L.scalar_cols[i]) = sc.w(i) * rc_nn(i) / sc.lam(i);

  const VectorXd hfry = apply_hf_t(L, sc, ry);
  const VectorXd h1 = rx - L.A * zeta - w.Atil * hfry;
  const VectorXd g1 = solve_refined(w, h1);
  const double cWry = w.hfc.dot(hfry);
  const double h3 = rzp + L.c.dot(zeta) + cWry + rtk / tau;
  const VectorXd bmu = 2.0 * L.b - w.u;
  const double denom = bmu.dot(w.g2) + w.cWc + kappa / tau;
  if (!(denom > 0) || !std::isfinite(denom)) return d;
  d.dtau = (h3 - bmu.dot(g1)) / denom;
  d.dy = g1 + d.dtau * w.g2;
  d.ds = L.c * d.dtau - L.A.transpose() * d.dy - ry;
  d.dx = zeta - apply_hf(L, sc, apply_hf_t(L, sc, d.ds));
  d.dkappa = (rtk - kappa * d.dtau) / tau;
  d.ok = d.dx.allFinite() && d.dy.allFinite() && d.ds.allFinite() && std::isfinite(d.dtau) &&
         std::isfinite(d.dkappa);
  return d;
}

// KKT-level iterative refinement: near convergence the scaled system is
// ill-conditioned enough that raw directions stall the primal residual around
// 1e-8; re-solving on the full-system residuals restores it.
Direction solve_direction_refined(const Lowered& L, const Scaling& sc, const IterationWork& w,
                                  double tau, double kappa, const VectorXd& rx,
                                  const VectorXd& ry, double rzp,
                                  const std::vector<MatrixXd>& rc_psd, const VectorXd& rc_nn,
                                  double rtk) {
  Direction d = solve_direction(L, sc, w, tau, kappa, rx, ry, rzp, rc_psd, rc_nn, rtk);
  if (!d.ok) return d;
  for (int pass = 0; pass < 4; ++pass) {
    const VectorXd e1 = rx - (L.A * d.dx - L.b * d.dtau);
    const VectorXd e2 = ry - (L.c * d.dtau - L.A.transpose() * d.dy - d.ds);
    const double e3 = rzp - (L.b.dot(d.dy) - L.c.dot(d.dx) - d.dkappa);
    std::vector<MatrixXd> ec_psd;
    ec_psd.reserve(L.psd.size());
    double worst = std::max({e1.lpNorm<Eigen::Infinity>(), e2.lpNorm<Eigen::Infinity>(),
                             std::abs(e3)});
    for (size_t p = 0; p < L.psd.size(); ++p) {
      const auto& blk = L.psd[p];
      const auto& ps = sc.psd[p];
      const MatrixXd dxh = ps.Gi * smat(d.dx.data() + blk.off, blk.k) * ps.Gi.transpose();
      const MatrixXd dsh = ps.G.transpose() * smat(d.ds.data() + blk.off, blk.k) * ps.G;
      MatrixXd ec = rc_psd[p];
      for (int i = 0; i < blk.k; ++i)
        for (int j = 0; j < blk.k; ++j)
          ec(i, j) -= 0.5 * (ps.lam(i) + ps.lam(j)) * (dxh(i, j) + dsh(i, j));
      worst = std::max(worst, ec.cwiseAbs().maxCoeff());
      ec_psd.push_back(std::move(ec));
    }
    VectorXd ec_nn(L.scalar_cols.size());
    for (size_t i = 0; i < L.scalar_cols.size(); ++i) {
      const int col = L.scalar_cols[i];
      ec_nn(i) = rc_nn(i) - sc.lam(i) * (d.dx(col) / sc.w(i) + sc.w(i) * d.ds(col));
      worst = std::max(worst, std::abs(ec_nn(i)));
    }
    const double etk = rtk - (tau * d.dkappa + kappa * d.dtau);
    worst = std::max(worst, std::abs(etk));
    if (worst < 1e-13) break;
    const Direction corr =
        solve_direction(L, sc, w, tau, kappa, e1, e2, e3, ec_psd, ec_nn, etk);
    if (!corr.ok) break;
    d.dx += corr.dx;
    d.dy += corr.dy;
    d.ds += corr.ds;
    d.dtau += corr.dtau;
    d.dkappa += corr.dkappa;
  }
  return d;
}

}  // namespace

ConeSolution solve(const ConeProgram& p, const SolverSettings& st) {
  p.validate();
  const detail::RealifyResult rr = detail::realify_ex(p);
  const Lowered L = lower(p, rr.prog, st);
  const int user_rows = static_cast<int>(p.constraints.size());
  auto scatter_rows = [&](const VectorXd& v) {
    std::vector<double> full(user_rows, 0.0);
    for (int i = 0; i < L.P; ++i) full[rr.kept_rows[i]] = v(i);
    return full;
  };

  VectorXd x = VectorXd::Zero(L.N), s = VectorXd::Zero(L.N);
  for (const auto& v : L.psd) {
    VectorXd seg(v.len);
    svec_into(MatrixXd::Identity(v.k, v.k), seg.data());
    x.segment(v.off, v.len) = seg;
    s.segment(v.off, v.len) = seg;
  }
  for (int col : L.scalar_cols) {
    x(col) = 1.0;
    s(col) = 1.0;
  }
  VectorXd y = VectorXd::Zero(L.P);
  double tau = 1.0, kappa = 1.0;

  const double bnorm = L.b.lpNorm<Eigen::Infinity>();
  const double cnorm = L.c.lpNorm<Eigen::Infinity>();

  ConeSolution sol;
  sol.status = SolveStatus::NumericalFailure;

  auto fill_values = [&](std::vector<HermitianOperator>& mats, std::vector<double>& scals,
                         const VectorXd& vec) {
    mats.clear();
    scals.clear();
    for (const auto& bm : L.map) {
      if (bm.kind == BlockKind::Psd) {
        HermitianOperator h(smat(vec.data() + bm.off, bm.k).cast<Complex>());
        mats.push_back(bm.embedded ? complex_readback(h) : h);
        scals.push_back(0.0);
      } else {
        mats.push_back(HermitianOperator::zero(1));
        scals.push_back(bm.kind == BlockKind::Free ? vec(bm.off) - vec(bm.off + 1)
                                                   : vec(bm.off));
      }
    }
  };

  int stalls = 0;
  for (int iter = 0; iter <= st.max_iters; ++iter) {
    const VectorXd rp_vec = L.A * x - L.b * tau;
    const VectorXd rd_vec = L.c * tau - L.A.transpose() * y - s;
    const double by = L.b.dot(y);
    const double cx = L.c.dot(x);
    const double rg = by - cx - kappa;
    const double mu = (x.dot(s) + tau * kappa) / (L.nu + 1.0);

    // -- termination on the tau-scaled candidate
    {
      const VectorXd xs = x / tau, ys = y / tau, ss = s / tau;
      const double pres =
          (L.A * xs - L.b).lpNorm<Eigen::Infinity>() / (1.0 + bnorm);
      const double dres =
          (L.A.transpose() * ys + ss - L.c).lpNorm<Eigen::Infinity>() / (1.0 + cnorm);
      const double pobj = L.c.dot(xs);
      const double dobj = L.b.dot(ys);
      const double relgap =
          std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
      if (st.verbose) {
        std::printf("iter %3d  mu %.3e  pres %.3e  dres %.3e  gap %.3e  tau %.3e  kappa %.3e\n",
                    iter, mu, pres, dres, relgap, tau, kappa);
      }
      sol.primal_residual = pres;
      sol.dual_residual = dres;
      sol.iterations = iter;
      if (pres <= st.eps_feas && dres <= st.eps_feas && relgap <= st.eps_gap) {
        sol.status = SolveStatus::Optimal;
        fill_values(sol.matrix_values, sol.scalar_values, xs);
        sol.duals = scatter_rows(ys);
        sol.objective_primal = L.sense_factor * pobj;
        sol.objective_dual = L.sense_factor * dobj;
        sol.gap = std::abs(pobj - dobj);
        return sol;
      }
      // -- infeasibility certificates
      if (by > 0) {
        const double res = (L.A.transpose() * y + s).lpNorm<Eigen::Infinity>() / by;
        if (res <= st.infeas_cert_tol * (1.0 + cnorm) &&
            by >= st.infeas_ray_scale * tau * (1.0 + bnorm)) {
          sol.status = SolveStatus::PrimalInfeasible;
          VectorXd fy = y / by;
          sol.farkas_y = scatter_rows(fy);
          sol.objective_primal = 0;
          sol.objective_dual = 0;
          sol.gap = 0;
          return sol;
        }
      }
      if (cx < 0) {
        const double res = (L.A * x).lpNorm<Eigen::Infinity>() / (-cx);
        if (res <= st.infeas_cert_tol * (1.0 + bnorm) &&
            -cx >= st.infeas_ray_scale * tau * (1.0 + cnorm)) {
          sol.status = SolveStatus::DualInfeasible;
          fill_values(sol.ray_matrix, sol.ray_scalar, VectorXd(x / (-cx)));
          sol.objective_primal = 0;
          sol.objective_dual = 0;
          sol.gap = 0;
          return sol;
        }
      }
      if (iter == st.max_iters) break;
    }

    const Scaling sc = compute_scaling(L, x, s);
    if (!sc.ok) break;

    // -- scaled constraint matrix and normal equations
    IterationWork w;
    w.Atil = MatrixXd::Zero(L.P, L.N);
    for (size_t i = 0; i < L.scalar_cols.size(); ++i) {
      const int col = L.scalar_cols[i];
      w.Atil.col(col) = sc.w(i) * L.A.col(col);
    }
    for (size_t pi = 0; pi < L.psd.size(); ++pi) {
      const auto& blk = L.psd[pi];
      const auto& ps = sc.psd[pi];
      VectorXd seg(blk.len), rowseg(blk.len);
      for (int r : blk.rows) {
        rowseg = L.A.row(r).segment(blk.off, blk.len);
        MatrixXd t = ps.G.transpose() * smat(rowseg.data(), blk.k) * ps.G;
        svec_into(t, seg.data());
        w.Atil.block(r, blk.off, 1, blk.len) = seg.transpose();
      }
    }
    w.hfc = apply_hf_t(L, sc, L.c);
    w.u = w.Atil * w.hfc + L.b;
    w.cWc = w.hfc.dot(w.hfc);
    w.Mmat = MatrixXd::Zero(L.P, L.P);
    w.Mmat.selfadjointView<Eigen::Lower>().rankUpdate(w.Atil);
    w.Mmat = w.Mmat.selfadjointView<Eigen::Lower>();
    const double reg = 1e-13 * std::max(1.0, w.Mmat.diagonal().maxCoeff());
    w.Mmat.diagonal().array() += reg;
    w.fact.compute(w.Mmat);
    if (w.fact.info() != Eigen::Success) break;
    w.g2 = solve_refined(w, w.u);

    // -- predictor
    std::vector<MatrixXd> rc_psd;
    rc_psd.reserve(L.psd.size());
    for (const auto& ps : sc.psd) {
      MatrixXd rc = MatrixXd::Zero(ps.lam.size(), ps.lam.size());
      rc.diagonal() = -ps.lam.cwiseProduct(ps.lam);
      rc_psd.push_back(std::move(rc));
    }
    VectorXd rc_nn = -sc.lam.cwiseProduct(sc.lam);
    Direction aff = solve_direction_refined(L, sc, w, tau, kappa, -rp_vec, -rd_vec, -rg,
                                            rc_psd, rc_nn, -tau * kappa);
    if (!aff.ok) break;

    double a_aff = std::min(
        {1.0, cone_step(L, sc, x, aff.dx, true), cone_step(L, sc, s, aff.ds, false),
         aff.dtau < 0 ? -tau / aff.dtau : kInf, aff.dkappa < 0 ? -kappa / aff.dkappa : kInf});
    const double mu_aff = ((x + a_aff * aff.dx).dot(s + a_aff * aff.ds) +
                           (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) /
                          (L.nu + 1.0);
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // -- corrector
    for (size_t pi = 0; pi < L.psd.size(); ++pi) {
      const auto& blk = L.psd[pi];
      const auto& ps = sc.psd[pi];
      MatrixXd dxh = ps.Gi * smat(aff.dx.data() + blk.off, blk.k) * ps.Gi.transpose();
      MatrixXd dsh = ps.G.transpose() * smat(aff.ds.data() + blk.off, blk.k) * ps.G;
      MatrixXd corr = 0.5 * (dxh * dsh + dsh * dxh);
      rc_psd[pi] = -corr;
      rc_psd[pi].diagonal() += (sigma * mu) * VectorXd::Ones(blk.k) -
                               ps.lam.cwiseProduct(ps.lam);
    }
    for (size_t i = 0; i < L.scalar_cols.size(); ++i) {
      const int col = L.scalar_cols[i];
      rc_nn(i) = sigma * mu - sc.lam(i) * sc.lam(i) - aff.dx(col) * aff.ds(col);
    }
    const double rtk = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
    const double f = 1.0 - sigma;
    Direction dir = solve_direction_refined(L, sc, w, tau, kappa, VectorXd(-f * rp_vec),
                                            VectorXd(-f * rd_vec), -f * rg, rc_psd, rc_nn, rtk);
    if (!dir.ok) break;

    double a_max = std::min(
        {cone_step(L, sc, x, dir.dx, true), cone_step(L, sc, s, dir.ds, false),
         dir.dtau < 0 ? -tau / dir.dtau : kInf, dir.dkappa < 0 ? -kappa / dir.dkappa : kInf});
    const double alpha = std::min(1.0, 0.99 * a_max);
    if (alpha < 1e-10) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }

    x += alpha * dir.dx;
    y += alpha * dir.dy;
    s += alpha * dir.ds;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }

  // max_iters or numerical trouble: report the best scaled point we have
  fill_values(sol.matrix_values, sol.scalar_values, VectorXd(x / tau));
  const VectorXd ys = y / tau;
  sol.duals = scatter_rows(ys);
  sol.objective_primal = L.sense_factor * L.c.dot(x / tau);
  sol.objective_dual = L.sense_factor * L.b.dot(ys);
  sol.gap = std::abs(L.c.dot(x / tau) - L.b.dot(ys));
  sol.status = SolveStatus::NumericalFailure;
  return sol;
}

}  // namespace incompat
