#pragma once

#include <cstdint>
#include <vector>

#include "incompat/hermitian.hpp"
#include "incompat/random.hpp"

namespace incompat {

/// One outcome per setting. The canonical index of every string-indexed
/// array is the lexicographic position, first setting most significant.
struct OutcomeString {
  std::vector<int> digits;

  int settings() const { return static_cast<int>(digits.size()); }
  /// D_a(a|x) = delta_{a, a_x}.
  bool selects(int a, int x) const { return digits.at(x) == a; }
};

inline constexpr int kStringCap = 4096;

/// All o^m outcome strings in lexicographic order.
std::vector<OutcomeString> deterministic_table(int settings, int outcomes, int cap = kStringCap);

/// Mixed-radix variant: digit x ranges over [0, radices[x]).
std::vector<OutcomeString> enumerate_strings(const std::vector<int>& radices,
                                             int cap = kStringCap);

class Povm {
 public:
  Povm(int dim, std::vector<HermitianOperator> elements);

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const HermitianOperator& element(int a) const { return elements_.at(a); }
  const std::vector<HermitianOperator>& elements() const { return elements_; }

  /// Most negative element eigenvalue (0 if all PSD).
  double worst_psd_residual() const;
  /// max |(sum_a M_a - I)_{ij}|.
  double completeness_residual() const;

 private:
  int dim_;
  std::vector<HermitianOperator> elements_;
};

/// m POVMs on a common dimension with a common outcome count; heterogeneous
/// inputs are padded with zero elements.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Povm> povms);

  int dim() const { return dim_; }
  int settings() const { return static_cast<int>(povms_.size()); }
  int outcomes() const { return outcomes_; }
  const Povm& povm(int x) const { return povms_.at(x); }
  const HermitianOperator& element(int a, int x) const { return povms_.at(x).element(a); }

 private:
  int dim_;
  int outcomes_;
  std::vector<Povm> povms_;
};

/// Classical simulation map. For each target setting y the table R_y(x,b|a)
/// is nonnegative with sum_b R_y(x,b|a) = t_y(x) independent of a, and
/// sum_x t_y(x) = 1.
class SimulationKernel {
 public:
  SimulationKernel(int source_settings, int source_outcomes, int target_settings,
                   int target_outcomes, std::vector<double> table);

  static SimulationKernel identity(int settings, int outcomes);

  int source_settings() const { return m_; }
  int source_outcomes() const { return o_; }
  int target_settings() const { return n_; }
  int target_outcomes() const { return p_; }

  double r(int y, int x, int b, int a) const {
    return table_[((static_cast<size_t>(y) * m_ + x) * p_ + b) * o_ + a];
  }
  const std::vector<double>& table() const { return table_; }

  double t(int y, int x) const;  // sum_b r(y,x,b,0)

 private:
  int m_, o_, n_, p_;
  std::vector<double> table_;
};

/// second o first: simulate with `first`, then post-process with `second`.
SimulationKernel compose(const SimulationKernel& second, const SimulationKernel& first);

/// M'_{b|y} = sum_{x,a} R_y(x,b|a) M_{a|x}.
MeasurementSet apply_simulation(const MeasurementSet& m, const SimulationKernel& k);

MeasurementSet mix(const MeasurementSet& m1, const MeasurementSet& m2, double p);

/// Deterministic in the seed; POVMs are normalised Wishart samples
/// M_a = S^{-1/2} A_a S^{-1/2} with A_a = B B^dag, S = sum_a A_a.
MeasurementSet random_measurement_set(int dim, int settings, int outcomes, std::uint64_t seed);

SimulationKernel random_kernel(int source_settings, int source_outcomes, int target_settings,
                               int target_outcomes, Rng& rng);

/// Every element I/o: the measurement that ignores the state.
MeasurementSet trivial_set(int dim, int settings, int outcomes);

/// Post-processing of one random parent POVM: jointly measurable by
/// construction.
MeasurementSet random_compatible_set(int dim, int settings, int outcomes, std::uint64_t seed);

MeasurementSet qubit_mub_pair();   // projective {Z, X}
MeasurementSet qubit_mub_trio();   // projective {Z, X, Y}
/// mix(qubit_mub_pair(), trivial, eta): elements (I +- eta P)/2.
MeasurementSet smeared_mub_pair(double eta);

/// String-indexed POVM with recorded normalisation sum_a G_a = scale * I.
class ParentPovm {
 public:
  ParentPovm(int dim, std::vector<HermitianOperator> elements, double scale);

  int dim() const { return dim_; }
  double scale() const { return scale_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const HermitianOperator& element(int i) const { return elements_.at(i); }
  const std::vector<HermitianOperator>& elements() const { return elements_; }

 private:
  int dim_;
  double scale_;
  std::vector<HermitianOperator> elements_;
};

}  // namespace incompat
