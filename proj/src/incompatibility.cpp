#include "incompat/incompatibility.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace incompat {

SolverSettings roi_solver_settings() {
  // Feasibility tight so returned witnesses re-verify inside the 1e-8 PSD
  // band; the gap target sits just above the double-precision floor of the
  // hardest instances. Certification quality is guarded separately by the
  // 1e-7 primal/dual agreement check in roi().
  SolverSettings st;
  st.eps_gap = 4e-9;
  st.eps_feas = 1e-9;
  return st;
}

namespace {

// One relaxed retry on numerical failure; the cross-solve certificate in
// roi() still decides whether the values are trustworthy.
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

}  // namespace

void DualWitness::verify() const {
  const int d = dim(), m = settings(), o = outcomes();
  if (std::abs(x_op.trace() - 1.0) > tol::trace)
    throw ValidationError("DualWitness: tr X = " + std::to_string(x_op.trace()));
  for (int x = 0; x < m; ++x)
    for (int a = 0; a < o; ++a) {
      const double lam = min_eigenvalue(omega[x][a]);
      if (lam < -tol::psd)
        throw ValidationError("DualWitness: omega(" + std::to_string(a) + "|" +
                              std::to_string(x) + ") has eigenvalue " + std::to_string(lam));
    }
  for (const OutcomeString& str : deterministic_table(m, o)) {
    HermitianOperator rhs = HermitianOperator::zero(d);
    for (int x = 0; x < m; ++x) rhs = rhs + omega[x][str.digits[x]];
    const double lam = min_eigenvalue(x_op - rhs);
    if (lam < -tol::psd)
      throw ValidationError("DualWitness: X - sum omega D has eigenvalue " +
                            std::to_string(lam));
  }
}

namespace {

std::vector<int> add_string_blocks(ProgramBuilder& pb, int count, int dim,
                                   const std::string& prefix) {
  std::vector<int> blocks;
  blocks.reserve(count);
  for (int i = 0; i < count; ++i) blocks.push_back(pb.add_psd_block(prefix + std::to_string(i), dim));
  return blocks;
}

}  // namespace

JmResult jm_feasibility(const MeasurementSet& m, const SolverSettings& settings) {
  const int d = m.dim(), ms = m.settings(), o = m.outcomes();
  if (o == 1) {
    return {true, ParentPovm(d, {HermitianOperator::identity(d)}, 1.0)};
  }
  const std::vector<OutcomeString> strings = deterministic_table(ms, o);

  ProgramBuilder pb;
  const std::vector<int> g = add_string_blocks(pb, strings.size(), d, "G");
  // Keep all outcomes of the first setting (these imply sum_a G_a = I) and
  // drop the last outcome for the remaining settings, which is implied by
  // POVM completeness; this keeps the rows linearly independent.
  for (int x = 0; x < ms; ++x) {
    const int a_max = x == 0 ? o : o - 1;
    for (int a = 0; a < a_max; ++a) {
      MatrixExpr expr(d);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(a, x)) expr.add_variable(g[i]);
      pb.add_matrix_eq(expr, m.element(a, x));
    }
  }
  pb.set_objective(LinearRow{}, Sense::Minimize);

  const ConeSolution sol = solve(pb.take(), settings);
  if (sol.status == SolveStatus::PrimalInfeasible) return {false, std::nullopt};
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("jm_feasibility: solver returned " + to_string(sol.status));
  std::vector<HermitianOperator> elements;
  elements.reserve(strings.size());
  for (int blk : g) elements.push_back(sol.matrix_values[blk]);
  return {true, ParentPovm(d, std::move(elements), 1.0)};
}

std::pair<double, ParentPovm> roi_primal(const MeasurementSet& m,
                                         const SolverSettings& settings) {
  const int d = m.dim(), ms = m.settings(), o = m.outcomes();
  const std::vector<OutcomeString> strings = deterministic_table(ms, o);

  ProgramBuilder pb;
  const std::vector<int> g = add_string_blocks(pb, strings.size(), d, "G");
  const int s = pb.add_nonneg("s");

  for (int x = 0; x < ms; ++x)
    for (int a = 0; a < o; ++a) {
      MatrixExpr expr(d);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(a, x)) expr.add_variable(g[i]);
      pb.add_psd_ge(expr, m.element(a, x), "T" + std::to_string(a) + "_" + std::to_string(x));
    }
  MatrixExpr total(d);
  for (int blk : g) total.add_variable(blk);
  total.add_scalar_times(s, HermitianOperator::identity(d).scaled(-1.0));
  pb.add_matrix_eq(total, HermitianOperator::zero(d));

  LinearRow obj;
  obj.scalar_terms.emplace_back(s, 1.0);
  pb.set_objective(std::move(obj), Sense::Minimize);

  const ConeSolution sol = solve_with_retry(pb.take(), settings);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("roi_primal: solver returned " + to_string(sol.status));
  std::vector<HermitianOperator> elements;
  elements.reserve(strings.size());
  for (int blk : g) elements.push_back(sol.matrix_values[blk]);
  return {sol.scalar_values[s], ParentPovm(d, std::move(elements), sol.scalar_values[s])};
}

std::pair<double, DualWitness> roi_dual(const MeasurementSet& m, const SolverSettings& settings) {
  const int d = m.dim(), ms = m.settings(), o = m.outcomes();
  const std::vector<OutcomeString> strings = deterministic_table(ms, o);

  ProgramBuilder pb;
  std::vector<std::vector<int>> w(ms, std::vector<int>(o));
  for (int x = 0; x < ms; ++x)
    for (int a = 0; a < o; ++a)
      w[x][a] = pb.add_psd_block("w" + std::to_string(a) + "_" + std::to_string(x), d);
  const int xblk = pb.add_psd_block("X", d);

  for (size_t i = 0; i < strings.size(); ++i) {
    MatrixExpr expr(d);
    expr.add_variable(xblk);
    for (int x = 0; x < ms; ++x) expr.add_variable(w[x][strings[i].digits[x]], -1.0);
    pb.add_psd_ge(expr, HermitianOperator::zero(d), "T" + std::to_string(i));
  }
  LinearRow trace_row;
  trace_row.matrix_terms.emplace_back(xblk, HermitianOperator::identity(d));
  trace_row.rhs = 1.0;
  pb.add_row(std::move(trace_row));

  LinearRow obj;
  for (int x = 0; x < ms; ++x)
    for (int a = 0; a < o; ++a) obj.matrix_terms.emplace_back(w[x][a], m.element(a, x));
  pb.set_objective(std::move(obj), Sense::Maximize);

  const ConeSolution sol = solve_with_retry(pb.take(), settings);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("roi_dual: solver returned " + to_string(sol.status));

  DualWitness witness{sol.matrix_values[xblk], {}};
  witness.omega.resize(ms);
  for (int x = 0; x < ms; ++x)
    for (int a = 0; a < o; ++a) witness.omega[x].push_back(sol.matrix_values[w[x][a]]);
  witness.verify();
  return {sol.objective_primal, witness};
}

RoiResult roi(const MeasurementSet& m, const SolverSettings& settings) {
  auto [s, parent] = roi_primal(m, settings);
  auto [v, witness] = roi_dual(m, settings);
  const double gap = std::abs(s - v);
  if (gap > tol::cert)
    throw SolverFailure("roi: primal " + std::to_string(s) + " and dual " + std::to_string(v) +
                        " disagree by " + std::to_string(gap));
  return RoiResult{std::max(0.0, 0.5 * (s + v) - 1.0), gap, std::move(parent),
                   std::move(witness)};
}

DiscriminationGame optimal_game_from_dual(const DualWitness& w) {
  const int d = w.dim(), m = w.settings(), o = w.outcomes();
  double nstar = 0.0;
  for (int x = 0; x < m; ++x)
    for (int a = 0; a < o; ++a) nstar += w.omega[x][a].trace();
  if (nstar <= tol::trace)
    throw ValidationError("optimal_game_from_dual: witness is traceless");

  std::vector<Ensemble> ensembles;
  std::vector<double> prior;
  for (int x = 0; x < m; ++x) {
    std::vector<DensityOperator> states;
    std::vector<double> joint(o, 0.0);
    double qx = 0.0;
    for (int a = 0; a < o; ++a) {
      const double tr = w.omega[x][a].trace();
      if (tr <= tol::trace) {
        states.push_back(maximally_mixed(d));
        joint[a] = 0.0;
      } else {
        states.emplace_back(w.omega[x][a].scaled(1.0 / tr));
        joint[a] = tr / nstar;
      }
      qx += joint[a];
    }
    std::vector<double> cond(o, 1.0 / o);
    if (qx > 0)
      for (int a = 0; a < o; ++a) cond[a] = joint[a] / qx;
    ensembles.emplace_back(std::move(states), std::move(cond));
    prior.push_back(qx);
  }
  // Degenerate settings keep their slot with prior zero; renormalise the
  // round-off drift only.
  double total = 0.0;
  for (double q : prior) total += q;
  for (double& q : prior) q /= total;
  return DiscriminationGame(std::move(ensembles), std::move(prior));
}

MeasurementSet noise_povm(const RoiResult& r, const MeasurementSet& m) {
  if (r.value <= tol::psd) return m;
  const int d = m.dim(), ms = m.settings(), o = m.outcomes();
  const std::vector<OutcomeString> strings = deterministic_table(ms, o);
  if (static_cast<int>(r.primal.size()) != static_cast<int>(strings.size()))
    throw DimensionError("noise_povm: parent does not match the measurement set");
  std::vector<Povm> povms;
  for (int x = 0; x < ms; ++x) {
    std::vector<HermitianOperator> els;
    for (int a = 0; a < o; ++a) {
      HermitianOperator cover = HermitianOperator::zero(d);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(a, x)) cover = cover + r.primal.element(i);
      els.push_back((cover - m.element(a, x)).scaled(1.0 / r.value));
    }
    povms.emplace_back(d, std::move(els));
  }
  return MeasurementSet(std::move(povms));
}

}  // namespace incompat
