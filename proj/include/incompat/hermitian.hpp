#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace incompat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Interior-point solutions carry O(1e-9) residuals; every ">= 0" and "= 1"
// check in the library is taken against these.
namespace tol {
inline constexpr double psd = 1e-8;    // min-eigenvalue slack for "A >= 0"
inline constexpr double feas = 1e-8;   // linear equality residuals
inline constexpr double gap = 1e-8;    // relative duality gap
inline constexpr double trace = 1e-6;  // trace normalisation
inline constexpr double cert = 1e-7;   // primal/dual value agreement
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable d x d complex Hermitian matrix. Construction symmetrises,
/// (A + A^dag)/2, so round-off asymmetry from solver iterates never
/// propagates into downstream algebra.
class HermitianOperator {
 public:
  explicit HermitianOperator(const CMatrix& m);

  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& entries() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }
  bool is_real(double eps = 1e-14) const;

  HermitianOperator scaled(double c) const { return HermitianOperator(c * m_); }

 private:
  CMatrix m_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double c, const HermitianOperator& a);

/// Hilbert-Schmidt inner product Re tr(A B); exact-real for Hermitian inputs.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);

/// Smallest eigenvalue with a unit-norm eigenvector.
std::pair<double, CVector> min_eigenpair(const HermitianOperator& a);

/// Trace over the first tensor factor: H(dA*dB) -> H(dB).
HermitianOperator partial_trace_first(const HermitianOperator& a, int dim_a, int dim_b);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

/// Rank-one projector |v><v| / <v|v>.
HermitianOperator projector(const CVector& v);

/// Trace-one positive operator, validated on construction.
class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator op);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

DensityOperator maximally_mixed(int dim);

}  // namespace incompat
