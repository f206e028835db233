#pragma once

#include <optional>
#include <vector>

#include "incompat/cone_program.hpp"
#include "incompat/discrimination.hpp"
#include "incompat/measurement.hpp"

namespace incompat {

/// Witness for the dual robustness program: PSD operators omega_{ax} and a
/// trace-one X with X >= sum_{a,x} omega_{ax} D_a(a|x) for every string a.
struct DualWitness {
  HermitianOperator x_op;
  std::vector<std::vector<HermitianOperator>> omega;  // [x][a]

  int dim() const { return x_op.dim(); }
  int settings() const { return static_cast<int>(omega.size()); }
  int outcomes() const { return omega.empty() ? 0 : static_cast<int>(omega[0].size()); }

  /// Explicit eigenvalue re-verification, independent of the solver that
  /// produced the witness. Throws ValidationError on violation.
  void verify() const;
};

struct RoiResult {
  double value = 0.0;  // I_R >= 0
  double gap = 0.0;    // |primal - dual|
  ParentPovm primal;
  DualWitness dual;
};

struct JmResult {
  bool jointly_measurable = false;
  std::optional<ParentPovm> parent;  // present when jointly measurable
};

/// Default solver settings for the robustness programs: tightened so the
/// certified gap has two orders of margin over the 1e-7 agreement target.
SolverSettings roi_solver_settings();

/// Joint-measurability as a feasibility SDP over the canonical
/// string-indexed parent.
JmResult jm_feasibility(const MeasurementSet& m,
                        const SolverSettings& settings = roi_solver_settings());

/// min s s.t. sum_a D_a(a|x) G_a >= M_{a|x}, sum_a G_a = s*I, G_a >= 0.
/// Returns s = 1 + I_R and the optimal super-normalised parent.
std::pair<double, ParentPovm> roi_primal(const MeasurementSet& m,
                                         const SolverSettings& settings = roi_solver_settings());

/// max tr sum omega_{ax} M_{a|x} s.t. X >= sum omega_{ax} D_a(a|x),
/// omega >= 0, tr X = 1. Returns 1 + I_R and the verified witness.
std::pair<double, DualWitness> roi_dual(const MeasurementSet& m,
                                        const SolverSettings& settings = roi_solver_settings());

/// Runs both programs and certifies their agreement.
RoiResult roi(const MeasurementSet& m, const SolverSettings& settings = roi_solver_settings());

/// The optimal discrimination game of the dual witness: prior
/// q*(a,x) = tr omega_{ax} / N*, states omega_{ax} / tr omega_{ax}.
DiscriminationGame optimal_game_from_dual(const DualWitness& w);

/// Noise measurements realising the optimal mixing, reconstructed from the
/// primal witness: N_{a|x} = (sum_a D_a(a|x) G_a - M_{a|x}) / r, or M itself
/// at r = 0.
MeasurementSet noise_povm(const RoiResult& r, const MeasurementSet& m);

}  // namespace incompat
