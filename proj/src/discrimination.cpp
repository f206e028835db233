#include "incompat/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "incompat/incompatibility.hpp"

namespace incompat {

Ensemble::Ensemble(std::vector<DensityOperator> states, std::vector<double> probs)
    : states_(std::move(states)), probs_(std::move(probs)) {
  if (states_.empty()) throw ValidationError("Ensemble: no states");
  if (states_.size() != probs_.size())
    throw DimensionError("Ensemble: " + std::to_string(states_.size()) + " states vs " +
                         std::to_string(probs_.size()) + " probabilities");
  double sum = 0.0;
  for (size_t b = 0; b < probs_.size(); ++b) {
    if (probs_[b] < -1e-12)
      throw ValidationError("Ensemble: negative probability at state " + std::to_string(b));
    if (states_[b].dim() != states_[0].dim())
      throw DimensionError("Ensemble: state " + std::to_string(b) + " has mixed dimension");
    sum += probs_[b];
  }
  if (std::abs(sum - 1.0) > tol::trace)
    throw ValidationError("Ensemble: probabilities sum to " + std::to_string(sum));
}

DiscriminationGame::DiscriminationGame(std::vector<Ensemble> ensembles, std::vector<double> prior)
    : ensembles_(std::move(ensembles)), prior_(std::move(prior)) {
  if (ensembles_.empty()) throw ValidationError("DiscriminationGame: no ensembles");
  if (ensembles_.size() != prior_.size())
    throw DimensionError("DiscriminationGame: prior length mismatch");
  double sum = 0.0;
  for (size_t y = 0; y < prior_.size(); ++y) {
    if (prior_[y] < -1e-12)
      throw ValidationError("DiscriminationGame: negative prior at ensemble " +
                            std::to_string(y));
    if (ensembles_[y].dim() != ensembles_[0].dim())
      throw DimensionError("DiscriminationGame: ensemble " + std::to_string(y) +
                           " has dimension " + std::to_string(ensembles_[y].dim()) +
                           ", expected " + std::to_string(ensembles_[0].dim()));
    sum += prior_[y];
  }
  if (std::abs(sum - 1.0) > tol::trace)
    throw ValidationError("DiscriminationGame: prior sums to " + std::to_string(sum));
}

DiscriminationGame single_ensemble_game(Ensemble e) {
  std::vector<Ensemble> es;
  es.push_back(std::move(e));
  return DiscriminationGame(std::move(es), {1.0});
}

DiscriminationGame random_game(int dim, int ensembles, int states, Rng& rng) {
  std::vector<Ensemble> es;
  for (int y = 0; y < ensembles; ++y) {
    std::vector<DensityOperator> sts;
    for (int b = 0; b < states; ++b) sts.push_back(random_density(dim, rng));
    es.emplace_back(std::move(sts), rng.simplex(states));
  }
  return DiscriminationGame(std::move(es), rng.simplex(ensembles));
}

double p_guess(const DiscriminationGame& game, const MeasurementSet& m) {
  if (game.dim() != m.dim())
    throw DimensionError("p_guess: game dimension " + std::to_string(game.dim()) +
                         " vs measurement dimension " + std::to_string(m.dim()));
  double total = 0.0;
  for (int y = 0; y < game.size(); ++y) {
    const Ensemble& e = game.ensemble(y);
    double best = 0.0;
    for (int x = 0; x < m.settings(); ++x) {
      double v = 0.0;
      for (int a = 0; a < m.outcomes(); ++a) {
        double guess = 0.0;
        for (int b = 0; b < e.size(); ++b)
          guess = std::max(guess, game.joint(b, y) * hs_inner(e.state(b).op(), m.element(a, x)));
        v += guess;
      }
      if (x == 0 || v > best) best = v;  // ties broken toward the lowest x
    }
    total += best;
  }
  return total;
}

std::pair<double, ParentPovm> p_guess_compatible(const DiscriminationGame& game,
                                                 const SolverSettings& settings) {
  const int d = game.dim();
  std::vector<int> radices;
  for (int y = 0; y < game.size(); ++y) radices.push_back(game.ensemble(y).size());
  const std::vector<OutcomeString> strings = enumerate_strings(radices);

  ProgramBuilder pb;
  std::vector<int> gblocks;
  gblocks.reserve(strings.size());
  for (size_t i = 0; i < strings.size(); ++i)
    gblocks.push_back(pb.add_psd_block("G" + std::to_string(i), d));

  LinearRow obj;
  for (size_t i = 0; i < strings.size(); ++i) {
    HermitianOperator c = HermitianOperator::zero(d);
    for (int y = 0; y < game.size(); ++y) {
      const int b = strings[i].digits[y];
      c = c + game.joint(b, y) * game.ensemble(y).state(b).op();
    }
    obj.matrix_terms.emplace_back(gblocks[i], c);
  }
  pb.set_objective(std::move(obj), Sense::Maximize);

  MatrixExpr completeness(d);
  for (int blk : gblocks) completeness.add_variable(blk);
  pb.add_matrix_eq(completeness, HermitianOperator::identity(d));

  const ConeSolution sol = solve(pb.take(), settings);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("p_guess_compatible: solver returned " + to_string(sol.status));

  std::vector<HermitianOperator> elements;
  elements.reserve(strings.size());
  for (int blk : gblocks) elements.push_back(sol.matrix_values[blk]);
  return {sol.objective_primal, ParentPovm(d, std::move(elements), 1.0)};
}

double advantage(const DiscriminationGame& game, const MeasurementSet& m,
                 const SolverSettings& settings) {
  const double pg = p_guess(game, m);
  const double pc = p_guess_compatible(game, settings).first;
  if (pc <= 0) throw SolverFailure("advantage: degenerate compatible value");
  return pg / pc;
}

namespace {

struct PerSettingLp {
  ConeProgram program;
  std::vector<MatrixEqRows> metas;           // per target outcome b < p-1
  std::vector<std::vector<std::vector<int>>> r_idx;  // [x][b][a]
  std::vector<int> t_idx;
};

// Feasibility LP for reproducing target setting y from the set m. The last
// outcome's operator equality is implied by completeness of both sets and is
// dropped to keep the rows linearly independent; its Farkas operator is zero.
PerSettingLp build_sim_lp(const MeasurementSet& m, const MeasurementSet& target, int y) {
  const int d = m.dim(), ms = m.settings(), o = m.outcomes(), p = target.outcomes();
  PerSettingLp lp;
  ProgramBuilder pb;
  lp.r_idx.assign(ms, std::vector<std::vector<int>>(p, std::vector<int>(o, -1)));
  for (int x = 0; x < ms; ++x)
    for (int b = 0; b < p; ++b)
      for (int a = 0; a < o; ++a)
        lp.r_idx[x][b][a] = pb.add_nonneg("R" + std::to_string(x) + "_" + std::to_string(b) +
                                          "_" + std::to_string(a));
  for (int x = 0; x < ms; ++x) lp.t_idx.push_back(pb.add_nonneg("t" + std::to_string(x)));

  for (int b = 0; b + 1 < p; ++b) {
    MatrixExpr expr(d);
    for (int x = 0; x < ms; ++x)
      for (int a = 0; a < o; ++a) expr.add_scalar_times(lp.r_idx[x][b][a], m.element(a, x));
    lp.metas.push_back(pb.add_matrix_eq(expr, target.element(b, y)));
  }
  for (int x = 0; x < ms; ++x) {
    for (int a = 0; a < o; ++a) {
      LinearRow row;
      for (int b = 0; b < p; ++b) row.scalar_terms.emplace_back(lp.r_idx[x][b][a], 1.0);
      row.scalar_terms.emplace_back(lp.t_idx[x], -1.0);
      row.rhs = 0.0;
      pb.add_row(std::move(row));
    }
  }
  LinearRow norm;
  for (int x = 0; x < ms; ++x) norm.scalar_terms.emplace_back(lp.t_idx[x], 1.0);
  norm.rhs = 1.0;
  pb.add_row(std::move(norm));
  pb.set_objective(LinearRow{}, Sense::Minimize);
  lp.program = pb.take();
  return lp;
}

bool sets_equal(const MeasurementSet& a, const MeasurementSet& b, double eps) {
  if (a.dim() != b.dim() || a.settings() != b.settings() || a.outcomes() != b.outcomes())
    return false;
  for (int x = 0; x < a.settings(); ++x)
    for (int o = 0; o < a.outcomes(); ++o)
      if ((a.element(o, x) - b.element(o, x)).max_abs() > eps) return false;
  return true;
}

}  // namespace

SimulabilityResult is_simulable(const MeasurementSet& m, const MeasurementSet& target,
                                const SolverSettings& settings) {
  if (m.dim() != target.dim()) throw DimensionError("is_simulable: dimension mismatch");
  if (sets_equal(m, target, tol::feas)) {
    return {true, SimulationKernel::identity(m.settings(), m.outcomes())};
  }
  SolverSettings st = settings;
  st.eps_feas = std::min(st.eps_feas, 1e-10);
  st.eps_gap = std::min(st.eps_gap, 1e-10);

  const int ms = m.settings(), o = m.outcomes(), p = target.outcomes();
  std::vector<double> table(static_cast<size_t>(ms) * o * target.settings() * p, 0.0);
  for (int y = 0; y < target.settings(); ++y) {
    PerSettingLp lp = build_sim_lp(m, target, y);
    const ConeSolution sol = solve(lp.program, st);
    if (sol.status == SolveStatus::PrimalInfeasible) return {false, std::nullopt};
    if (sol.status != SolveStatus::Optimal)
      throw SolverFailure("is_simulable: solver returned " + to_string(sol.status) +
                          " at target setting " + std::to_string(y));
    for (int x = 0; x < ms; ++x)
      for (int b = 0; b < p; ++b)
        for (int a = 0; a < o; ++a)
          table[((static_cast<size_t>(y) * ms + x) * p + b) * o + a] =
              std::max(0.0, sol.scalar_values[lp.r_idx[x][b][a]]);
  }
  return {true, SimulationKernel(ms, o, target.settings(), p, std::move(table))};
}

DiscriminationGame separating_game(const MeasurementSet& m, const MeasurementSet& target,
                                   const SolverSettings& settings) {
  if (m.dim() != target.dim()) throw DimensionError("separating_game: dimension mismatch");
  SolverSettings st = settings;
  st.eps_feas = std::min(st.eps_feas, 1e-10);
  st.eps_gap = std::min(st.eps_gap, 1e-10);
  const int d = m.dim(), p = target.outcomes();

  std::optional<DiscriminationGame> best;
  double best_gap = 0.0;
  for (int y = 0; y < target.settings(); ++y) {
    PerSettingLp lp = build_sim_lp(m, target, y);
    const ConeSolution sol = solve(lp.program, st);
    if (sol.status != SolveStatus::PrimalInfeasible) continue;

    // Farkas operators; the dropped outcome carries W = 0.
    std::vector<HermitianOperator> w(p, HermitianOperator::zero(d));
    for (int b = 0; b + 1 < p; ++b)
      w[b] = ProgramBuilder::dual_operator(lp.metas[b], sol.farkas_y);

    // omega_b = W_b + S with a common PSD shift: completeness of both sets
    // adds the same tr(S M) to each side of the separation inequality, so any
    // S >= 0 with S + W_b >= 0 preserves it. The minimal-trace S keeps the
    // game states as sharp as the certificate allows; fall back to the
    // scalar shift if the auxiliary solve misbehaves.
    HermitianOperator s_shift = HermitianOperator::zero(d);
    try {
      ProgramBuilder spb;
      const int sblk = spb.add_psd_block("S", d);
      for (int b = 0; b < p; ++b) {
        MatrixExpr expr(d);
        expr.add_variable(sblk);
        spb.add_psd_ge(expr, w[b].scaled(-1.0), "T" + std::to_string(b));
      }
      LinearRow obj;
      obj.matrix_terms.emplace_back(sblk, HermitianOperator::identity(d));
      spb.set_objective(obj, Sense::Minimize);
      const ConeSolution ssol = solve(spb.take(), st);
      if (ssol.status != SolveStatus::Optimal) throw SolverFailure("shift solve");
      s_shift = ssol.matrix_values[sblk];
    } catch (const std::exception&) {
      double c = 0.0;
      for (const auto& wb : w) c = std::max(c, -min_eigenvalue(wb));
      s_shift = HermitianOperator::identity(d).scaled(c);
    }
    std::vector<HermitianOperator> omega;
    omega.reserve(p);
    double z = 0.0;
    for (const auto& wb : w) {
      HermitianOperator ob = wb + s_shift;
      // clip the solver's eigenvalue round-off so DensityOperator accepts ob
      const double lam = min_eigenvalue(ob);
      if (lam < 0) ob = ob + HermitianOperator::identity(d).scaled(-lam);
      omega.push_back(std::move(ob));
      z += omega.back().trace();
    }
    if (z <= tol::trace) continue;
    std::vector<DensityOperator> states;
    std::vector<double> probs;
    for (const auto& ob : omega) {
      const double tr = ob.trace();
      if (tr <= tol::trace) {
        states.push_back(maximally_mixed(d));
        probs.push_back(0.0);
      } else {
        states.emplace_back(ob.scaled(1.0 / tr));
        probs.push_back(tr / z);
      }
    }
    DiscriminationGame game = single_ensemble_game(Ensemble(std::move(states), std::move(probs)));
    const double gap = p_guess(game, target) - p_guess(game, m);
    if (gap > best_gap) {
      best_gap = gap;
      best = std::move(game);
    }
  }
  if (!best) throw ValidationError("separating_game: called on a simulable pair");
  if (best_gap <= 1e-9)
    throw SolverFailure("separating_game: certificate gap " + std::to_string(best_gap) +
                        " below threshold");
  return *best;
}

MonotoneReport monotone_audit(const MeasurementSet& m, const MeasurementSet& target,
                              int n_games, std::uint64_t seed) {
  MonotoneReport rep;
  Rng rng(seed);
  const SimulabilityResult sim = is_simulable(m, target);
  rep.simulable = sim.simulable;
  if (sim.simulable) {
    rep.kernel = sim.kernel;
    rep.ok = true;
    rep.min_pguess_slack = 1.0;
    for (int g = 0; g < n_games; ++g) {
      const int ens = 1 + rng.uniform_int(3);
      const int sts = 2 + rng.uniform_int(2);
      DiscriminationGame game = random_game(m.dim(), ens, sts, rng);
      const double slack = p_guess(game, m) - p_guess(game, target);
      ++rep.games_checked;
      if (slack < rep.min_pguess_slack) rep.min_pguess_slack = slack;
      if (slack < -1e-9 && !rep.game) {
        rep.ok = false;
        rep.game = game;
        rep.note = "p_guess ordering violated at game " + std::to_string(g);
      }
    }
    rep.roi_source = roi(m).value;
    rep.roi_target = roi(target).value;
    if (rep.roi_source < rep.roi_target - 1e-6) {
      rep.ok = false;
      rep.note += (rep.note.empty() ? "" : "; ") + std::string("RoI ordering violated");
    }
  } else {
    DiscriminationGame game = separating_game(m, target);
    rep.separating_gap = p_guess(game, target) - p_guess(game, m);
    rep.game = std::move(game);
    rep.ok = rep.separating_gap > 1e-9;
    if (!rep.ok) rep.note = "separating gap not strict";
  }
  return rep;
}

}  // namespace incompat
