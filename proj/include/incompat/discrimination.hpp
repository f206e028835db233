#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incompat/cone_program.hpp"
#include "incompat/measurement.hpp"

namespace incompat {

/// Labeled states with their conditional distribution q(b|y).
class Ensemble {
 public:
  Ensemble(std::vector<DensityOperator> states, std::vector<double> probs);

  int dim() const { return states_[0].dim(); }
  int size() const { return static_cast<int>(states_.size()); }
  const DensityOperator& state(int b) const { return states_.at(b); }
  double prob(int b) const { return probs_.at(b); }

 private:
  std::vector<DensityOperator> states_;
  std::vector<double> probs_;
};

class DiscriminationGame {
 public:
  DiscriminationGame(std::vector<Ensemble> ensembles, std::vector<double> prior);

  int dim() const { return ensembles_[0].dim(); }
  int size() const { return static_cast<int>(ensembles_.size()); }
  const Ensemble& ensemble(int y) const { return ensembles_.at(y); }
  double prior(int y) const { return prior_.at(y); }
  /// Joint weight q(b,y) = q(y) q(b|y).
  double joint(int b, int y) const { return prior_.at(y) * ensembles_.at(y).prob(b); }

 private:
  std::vector<Ensemble> ensembles_;
  std::vector<double> prior_;
};

DiscriminationGame single_ensemble_game(Ensemble e);

DiscriminationGame random_game(int dim, int ensembles, int states, Rng& rng);

/// Optimal guessing probability with the fixed set {M_x}: the maximisation
/// over strategies is linear in each simplex, so the optimum is the
/// deterministic-vertex value sum_y max_x sum_a max_b q(b,y) tr[rho_{b|y} M_{a|x}].
double p_guess(const DiscriminationGame& game, const MeasurementSet& m);

/// Best single-measurement (compatible) performance, computed as one SDP over
/// a string-indexed POVM {G_b}.
std::pair<double, ParentPovm> p_guess_compatible(const DiscriminationGame& game,
                                                 const SolverSettings& settings = {});

/// p_guess / p_guess_compatible.
double advantage(const DiscriminationGame& game, const MeasurementSet& m,
                 const SolverSettings& settings = {});

struct SimulabilityResult {
  bool simulable = false;
  std::optional<SimulationKernel> kernel;  // present when simulable
};

/// Can m simulate target by classical pre/post-processing? Per-setting LP
/// feasibility with Farkas certificates on failure.
SimulabilityResult is_simulable(const MeasurementSet& m, const MeasurementSet& target,
                                const SolverSettings& settings = {});

/// Requires !is_simulable(m, target): a game on which `target` strictly beats
/// `m`, built from the Farkas certificate of the violated setting.
DiscriminationGame separating_game(const MeasurementSet& m, const MeasurementSet& target,
                                   const SolverSettings& settings = {});

struct MonotoneReport {
  bool simulable = false;
  bool ok = false;
  int games_checked = 0;
  double min_pguess_slack = 0.0;  // min over games of pg(m) - pg(target), simulable case
  double roi_source = 0.0;        // simulable case
  double roi_target = 0.0;
  double separating_gap = 0.0;  // non-simulable case
  std::optional<SimulationKernel> kernel;
  std::optional<DiscriminationGame> game;  // separating game, or first offender
  std::string note;
};

/// Exercises both directions of the monotone characterisation: ordering of
/// p_guess on random games plus RoI ordering when simulable, separating-game
/// extraction otherwise.
MonotoneReport monotone_audit(const MeasurementSet& m, const MeasurementSet& target,
                              int n_games, std::uint64_t seed);

}  // namespace incompat
