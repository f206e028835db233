#include "incompat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace incompat {

double brute_pguess(const DiscriminationGame& game, const MeasurementSet& m, std::int64_t cap) {
  if (game.dim() != m.dim()) throw DimensionError("brute_pguess: dimension mismatch");
  const int n = game.size(), ms = m.settings(), o = m.outcomes();
  int pmax = 0;
  for (int y = 0; y < n; ++y) pmax = std::max(pmax, game.ensemble(y).size());

  double table_count = 1;
  for (int y = 0; y < n; ++y) table_count *= ms;
  for (int i = 0; i < o * n; ++i) table_count *= pmax;
  if (table_count > static_cast<double>(cap))
    throw ValidationError("brute_pguess: strategy table count exceeds cap");

  // t[y][x][a][b] = q(b,y) tr(rho_{b|y} M_{a|x}); the same pairing the
  // optimized path uses, so agreement is limited only by summation order.
  std::vector<double> t(static_cast<size_t>(n) * ms * o * pmax, 0.0);
  auto tat = [&](int y, int x, int a, int b) -> double& {
    return t[((static_cast<size_t>(y) * ms + x) * o + a) * pmax + b];
  };
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < ms; ++x)
      for (int a = 0; a < o; ++a)
        for (int b = 0; b < game.ensemble(y).size(); ++b)
          tat(y, x, a, b) = game.joint(b, y) * hs_inner(game.ensemble(y).state(b).op(),
                                                        m.element(a, x));

  std::vector<int> f(n, 0);       // setting per ensemble
  std::vector<int> h(o * n, 0);   // guess per (outcome, ensemble)
  double best = 0.0;
  while (true) {
    while (true) {
      double score = 0.0;
      for (int y = 0; y < n; ++y)
        for (int a = 0; a < o; ++a) score += tat(y, f[y], a, h[a * n + y]);
      best = std::max(best, score);
      int i = 0;
      while (i < o * n && ++h[i] == pmax) h[i++] = 0;
      if (i == o * n) break;
    }
    int y = 0;
    while (y < n && ++f[y] == ms) f[y++] = 0;
    if (y == n) break;
  }
  return best;
}

namespace {

std::vector<HermitianOperator> random_string_povm(int d, int count, Rng& rng) {
  std::vector<HermitianOperator> b;
  HermitianOperator s = HermitianOperator::zero(d);
  for (int i = 0; i < count; ++i) {
    b.push_back(random_psd(d, rng));
    s = s + b.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.entries());
  const CMatrix si = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(1e-14).cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                     es.eigenvectors().adjoint();
  std::vector<HermitianOperator> g;
  for (int i = 0; i < count; ++i) g.emplace_back(si * b[i].entries() * si);
  return g;
}

}  // namespace

double brute_compatible(const DiscriminationGame& game, int restarts, std::uint64_t seed) {
  const int d = game.dim();
  std::vector<int> radices;
  for (int y = 0; y < game.size(); ++y) radices.push_back(game.ensemble(y).size());
  const std::vector<OutcomeString> strings = enumerate_strings(radices);
  const int ns = static_cast<int>(strings.size());

  std::vector<HermitianOperator> c;  // objective operator per string
  c.reserve(ns);
  for (int i = 0; i < ns; ++i) {
    HermitianOperator ci = HermitianOperator::zero(d);
    for (int y = 0; y < game.size(); ++y) {
      const int b = strings[i].digits[y];
      ci = ci + game.joint(b, y) * game.ensemble(y).state(b).op();
    }
    c.push_back(ci);
  }

  auto value_of = [&](const std::vector<HermitianOperator>& g) {
    double v = 0.0;
    for (int i = 0; i < ns; ++i) v += hs_inner(c[i], g[i]);
    return v;
  };

  Rng rng(seed);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<HermitianOperator> g = random_string_povm(d, ns, rng);
    best = std::max(best, value_of(g));
    // Fixed-point ascent G_i <- L^{-1/2} C_i G_i C_i L^{-1/2},
    // L = sum_i C_i G_i C_i; every iterate is a feasible POVM.
    for (int it = 0; it < 200; ++it) {
      CMatrix l = CMatrix::Zero(d, d);
      std::vector<CMatrix> cgc(ns);
      for (int i = 0; i < ns; ++i) {
        cgc[i] = c[i].entries() * g[i].entries() * c[i].entries();
        l += cgc[i];
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> es(l);
      const CMatrix li = es.eigenvectors() *
                         es.eigenvalues().cwiseMax(1e-16).cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                         es.eigenvectors().adjoint();
      double v = 0.0;
      for (int i = 0; i < ns; ++i) {
        g[i] = HermitianOperator(li * cgc[i] * li);
        v += hs_inner(c[i], g[i]);
      }
      if (v > best) best = v;
      if (it > 20 && v < best - 1e-12) break;
    }
  }
  return best;
}

bool brute_jm(const MeasurementSet& m, int restarts, std::uint64_t seed) {
  const int d = m.dim(), ms = m.settings(), o = m.outcomes();
  double count = 1;
  for (int x = 0; x < ms; ++x) count *= o;
  if (count > 16) throw ValidationError("brute_jm: string space too large for the oracle");
  const std::vector<OutcomeString> strings = deterministic_table(ms, o);
  const int ns = static_cast<int>(strings.size());

  // Parent parametrised as G_i = B_i^dag B_i with penalty
  //   sum_{a,x} |sum_i D_i(a|x) G_i - M_{a|x}|_F^2 + |sum_i G_i - I|_F^2.
  // An Adam phase on the Wirtinger gradient 2 B_i H_i gets near a minimiser;
  // since the penalty is quadratic in G itself, alternating projections
  // between the equality subspace and the PSD cone then polish the iterate
  // well past the quartic valleys where first-order steps crawl.
  const double success_penalty = 1e-9;

  // Independent rows: all outcomes of setting 0 (these imply completeness),
  // outcomes 0..o-2 elsewhere.
  struct Row {
    int a, x;
  };
  std::vector<Row> rows;
  for (int x = 0; x < ms; ++x)
    for (int a = 0; a < (x == 0 ? o : o - 1); ++a) rows.push_back({a, x});
  const int nr = static_cast<int>(rows.size());
  Eigen::MatrixXd dmat(nr, ns);
  for (int r = 0; r < nr; ++r)
    for (int i = 0; i < ns; ++i) dmat(r, i) = strings[i].selects(rows[r].a, rows[r].x) ? 1 : 0;
  const Eigen::MatrixXd dpinv =
      dmat.transpose() * (dmat * dmat.transpose()).ldlt().solve(Eigen::MatrixXd::Identity(nr, nr));

  auto penalty_of = [&](const std::vector<CMatrix>& g) {
    double pen = 0.0;
    for (int x = 0; x < ms; ++x)
      for (int a = 0; a < o; ++a) {
        CMatrix r = -m.element(a, x).entries();
        for (int i = 0; i < ns; ++i)
          if (strings[i].selects(a, x)) r += g[i];
        pen += r.squaredNorm();
      }
    CMatrix rc = -CMatrix::Identity(d, d);
    for (int i = 0; i < ns; ++i) rc += g[i];
    return pen + rc.squaredNorm();
  };

  auto penalty_and_grad = [&](const std::vector<CMatrix>& b, std::vector<CMatrix>* grad) {
    std::vector<CMatrix> g(ns);
    for (int i = 0; i < ns; ++i) g[i] = b[i].adjoint() * b[i];
    std::vector<CMatrix> resid;  // per (x,a), then completeness
    resid.reserve(ms * o + 1);
    double pen = 0.0;
    for (int x = 0; x < ms; ++x)
      for (int a = 0; a < o; ++a) {
        CMatrix r = -m.element(a, x).entries();
        for (int i = 0; i < ns; ++i)
          if (strings[i].selects(a, x)) r += g[i];
        pen += r.squaredNorm();
        resid.push_back(std::move(r));
      }
    CMatrix rc = -CMatrix::Identity(d, d);
    for (int i = 0; i < ns; ++i) rc += g[i];
    pen += rc.squaredNorm();
    if (grad) {
      for (int i = 0; i < ns; ++i) {
        CMatrix h = 2.0 * rc;
        for (int x = 0; x < ms; ++x) {
          const int a = strings[i].digits[x];
          h += 2.0 * resid[static_cast<size_t>(x) * o + a];
        }
        (*grad)[i] = 2.0 * b[i] * h;
      }
    }
    return pen;
  };

  Rng rng(seed);
  for (int r = 0; r < restarts; ++r) {
    std::vector<CMatrix> b(ns);
    for (int i = 0; i < ns; ++i) {
      b[i] = CMatrix(d, d);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) b[i](p, q) = 0.5 * rng.cnormal();
    }
    std::vector<CMatrix> grad(ns), m1(ns, CMatrix::Zero(d, d));
    std::vector<Eigen::MatrixXd> v2(ns, Eigen::MatrixXd::Zero(d, d));
    const double lr = 0.05;
    bool early = false;
    for (int it = 0; it < 600 && !early; ++it) {
      const double pen = penalty_and_grad(b, &grad);
      early = pen < success_penalty;
      const double b1 = 0.9, b2 = 0.999;
      const double corr1 = 1.0 - std::pow(b1, it + 1);
      const double corr2 = 1.0 - std::pow(b2, it + 1);
      for (int i = 0; i < ns; ++i) {
        m1[i] = b1 * m1[i] + (1.0 - b1) * grad[i];
        v2[i] = b2 * v2[i] + (1.0 - b2) * grad[i].cwiseAbs2();
        const CMatrix mhat = m1[i] / corr1;
        const Eigen::MatrixXd vhat = (v2[i] / corr2).cwiseSqrt();
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) b[i](p, q) -= lr * mhat(p, q) / (vhat(p, q) + 1e-9);
      }
    }
    if (early) return true;

    std::vector<CMatrix> g(ns);
    for (int i = 0; i < ns; ++i) g[i] = b[i].adjoint() * b[i];
    for (int it = 0; it < 2000; ++it) {
      // affine projection along the string axis, entry by entry
      std::vector<CMatrix> resid(nr);
      for (int rr = 0; rr < nr; ++rr) {
        CMatrix v = -m.element(rows[rr].a, rows[rr].x).entries();
        for (int i = 0; i < ns; ++i)
          if (dmat(rr, i) > 0) v += g[i];
        resid[rr] = v;
      }
      for (int i = 0; i < ns; ++i)
        for (int rr = 0; rr < nr; ++rr)
          if (dpinv(i, rr) != 0.0) g[i] -= dpinv(i, rr) * resid[rr];
      // cone projection
      for (int i = 0; i < ns; ++i) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g[i] + g[i].adjoint()));
        g[i] = es.eigenvectors() *
               es.eigenvalues().cwiseMax(0.0).asDiagonal().toDenseMatrix().cast<Complex>() *
               es.eigenvectors().adjoint();
      }
      if (it % 50 == 49 && penalty_of(g) < success_penalty) return true;
    }
    if (penalty_of(g) < success_penalty) return true;
  }
  return false;
}

}  // namespace incompat
