#pragma once

#include <vector>

#include "incompat/cone_program.hpp"
#include "incompat/incompatibility.hpp"
#include "incompat/measurement.hpp"

namespace incompat {

/// Unnormalised conditional states sigma_{a|x} on Bob's side with a common
/// reduced state of unit trace.
class Assemblage {
 public:
  /// sigma indexed [x][a].
  Assemblage(int dim, std::vector<std::vector<HermitianOperator>> sigma);

  int dim() const { return dim_; }
  int settings() const { return static_cast<int>(sigma_.size()); }
  int outcomes() const { return static_cast<int>(sigma_[0].size()); }
  const HermitianOperator& sigma(int a, int x) const { return sigma_.at(x).at(a); }

  HermitianOperator reduced_state() const;

  double worst_psd_residual() const;
  double no_signalling_residual() const;

 private:
  int dim_;
  std::vector<std::vector<HermitianOperator>> sigma_;
};

/// sigma_{a|x} = tr_A[(M_{a|x} x 1) rho_AB].
Assemblage assemblage_from(const DensityOperator& rho_ab, const MeasurementSet& m);

/// Local-hidden-state feasibility over the canonical deterministic
/// decomposition (same reduction as joint measurability).
bool lhs_feasibility(const Assemblage& a, const SolverSettings& settings = roi_solver_settings());

/// Consistent steering robustness: minimal noise weight with the noise
/// constrained to the same reduced state.
double consistent_steering_robustness(const Assemblage& a,
                                      const SolverSettings& settings = roi_solver_settings());

}  // namespace incompat
