#include "incompat/steering.hpp"

#include <cmath>
#include <utility>

namespace incompat {

Assemblage::Assemblage(int dim, std::vector<std::vector<HermitianOperator>> sigma)
    : dim_(dim), sigma_(std::move(sigma)) {
  if (sigma_.empty() || sigma_[0].empty()) throw ValidationError("Assemblage: empty table");
  for (size_t x = 0; x < sigma_.size(); ++x) {
    if (sigma_[x].size() != sigma_[0].size())
      throw DimensionError("Assemblage: ragged outcome counts");
    for (size_t a = 0; a < sigma_[x].size(); ++a) {
      if (sigma_[x][a].dim() != dim_)
        throw DimensionError("Assemblage: sigma(" + std::to_string(a) + "|" + std::to_string(x) +
                             ") has wrong dimension");
      const double lam = min_eigenvalue(sigma_[x][a]);
      if (lam < -tol::psd)
        throw ValidationError("Assemblage: sigma(" + std::to_string(a) + "|" +
                              std::to_string(x) + ") has eigenvalue " + std::to_string(lam));
    }
  }
  if (no_signalling_residual() > tol::feas)
    throw ValidationError("Assemblage: reduced states differ across settings by " +
                          std::to_string(no_signalling_residual()));
  const double tr = reduced_state().trace();
  if (std::abs(tr - 1.0) > tol::trace)
    throw ValidationError("Assemblage: reduced state has trace " + std::to_string(tr));
}

HermitianOperator Assemblage::reduced_state() const {
  HermitianOperator sum = HermitianOperator::zero(dim_);
  for (const auto& s : sigma_[0]) sum = sum + s;
  return sum;
}

double Assemblage::worst_psd_residual() const {
  double worst = 0.0;
  for (const auto& row : sigma_)
    for (const auto& s : row) worst = std::min(worst, min_eigenvalue(s));
  return -worst;
}

double Assemblage::no_signalling_residual() const {
  double worst = 0.0;
  const HermitianOperator ref = reduced_state();
  for (size_t x = 1; x < sigma_.size(); ++x) {
    HermitianOperator sum = HermitianOperator::zero(dim_);
    for (const auto& s : sigma_[x]) sum = sum + s;
    worst = std::max(worst, (sum - ref).max_abs());
  }
  return worst;
}

Assemblage assemblage_from(const DensityOperator& rho_ab, const MeasurementSet& m) {
  const int da = m.dim();
  if (rho_ab.dim() % da != 0)
    throw DimensionError("assemblage_from: state dimension " + std::to_string(rho_ab.dim()) +
                         " does not factor over measurement dimension " + std::to_string(da));
  const int db = rho_ab.dim() / da;
  const HermitianOperator eye_b = HermitianOperator::identity(db);
  std::vector<std::vector<HermitianOperator>> sigma(m.settings());
  for (int x = 0; x < m.settings(); ++x) {
    for (int a = 0; a < m.outcomes(); ++a) {
      const HermitianOperator op(kron(m.element(a, x), eye_b).entries() *
                                 rho_ab.op().entries());
      sigma[x].push_back(partial_trace_first(op, da, db));
    }
  }
  return Assemblage(db, std::move(sigma));
}

namespace {

ConeSolution solve_with_retry(const ConeProgram& p, const SolverSettings& st) {
  ConeSolution sol = solve(p, st);
  if (sol.status == SolveStatus::NumericalFailure &&
      (st.eps_feas < 1e-8 || st.eps_gap < 1e-8)) {
    SolverSettings relaxed = st;
    relaxed.eps_feas = std::max(st.eps_feas * 8, 1e-8);
    relaxed.eps_gap = std::max(st.eps_gap * 8, 1e-8);
    sol = solve(p, relaxed);
  }
  return sol;
}

struct SupportProjection {
  int rank = 0;
  CMatrix basis;  // dim x rank
};

// The noise and all LHS members are supported inside supp(sigma_R); solving
// in that subspace restores strict feasibility when the reduced state is
// singular.
SupportProjection support_of(const HermitianOperator& reduced) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(reduced.entries());
  const double cut = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());
  SupportProjection sp;
  std::vector<int> keep;
  for (int i = 0; i < reduced.dim(); ++i)
    if (es.eigenvalues()(i) > cut) keep.push_back(i);
  sp.rank = static_cast<int>(keep.size());
  sp.basis = CMatrix(reduced.dim(), sp.rank);
  for (int k = 0; k < sp.rank; ++k) sp.basis.col(k) = es.eigenvectors().col(keep[k]);
  return sp;
}

HermitianOperator project(const SupportProjection& sp, const HermitianOperator& h) {
  return HermitianOperator(sp.basis.adjoint() * h.entries() * sp.basis);
}

}  // namespace

bool lhs_feasibility(const Assemblage& a, const SolverSettings& settings) {
  const int m = a.settings(), o = a.outcomes();
  if (o == 1) return true;
  const SupportProjection sp = support_of(a.reduced_state());
  const std::vector<OutcomeString> strings = deterministic_table(m, o);

  ProgramBuilder pb;
  std::vector<int> g;
  for (size_t i = 0; i < strings.size(); ++i)
    g.push_back(pb.add_psd_block("S" + std::to_string(i), sp.rank));
  for (int x = 0; x < m; ++x) {
    const int a_max = x == 0 ? o : o - 1;
    for (int aa = 0; aa < a_max; ++aa) {
      MatrixExpr expr(sp.rank);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(aa, x)) expr.add_variable(g[i]);
      pb.add_matrix_eq(expr, project(sp, a.sigma(aa, x)));
    }
  }
  pb.set_objective(LinearRow{}, Sense::Minimize);

  const ConeSolution sol = solve(pb.take(), settings);
  if (sol.status == SolveStatus::PrimalInfeasible) return false;
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("lhs_feasibility: solver returned " + to_string(sol.status));
  return true;
}

double consistent_steering_robustness(const Assemblage& a, const SolverSettings& settings) {
  const int m = a.settings(), o = a.outcomes();
  if (o == 1) return 0.0;
  const SupportProjection sp = support_of(a.reduced_state());
  const HermitianOperator reduced = project(sp, a.reduced_state());
  const std::vector<OutcomeString> strings = deterministic_table(m, o);

  ProgramBuilder pb;
  std::vector<int> g;
  for (size_t i = 0; i < strings.size(); ++i)
    g.push_back(pb.add_psd_block("S" + std::to_string(i), sp.rank));
  const int t = pb.add_nonneg("t");

  for (int x = 0; x < m; ++x)
    for (int aa = 0; aa < o; ++aa) {
      MatrixExpr expr(sp.rank);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(aa, x)) expr.add_variable(g[i]);
      pb.add_psd_ge(expr, project(sp, a.sigma(aa, x)),
                    "T" + std::to_string(aa) + "_" + std::to_string(x));
    }
  MatrixExpr total(sp.rank);
  for (int blk : g) total.add_variable(blk);
  total.add_scalar_times(t, reduced.scaled(-1.0));
  pb.add_matrix_eq(total, HermitianOperator::zero(sp.rank));

  LinearRow obj;
  obj.scalar_terms.emplace_back(t, 1.0);
  pb.set_objective(std::move(obj), Sense::Minimize);

  const ConeSolution sol = solve_with_retry(pb.take(), settings);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("consistent_steering_robustness: solver returned " +
                        to_string(sol.status));
  return std::max(0.0, sol.scalar_values[t] - 1.0);
}

}  // namespace incompat
