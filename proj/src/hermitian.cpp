#include "incompat/hermitian.hpp"

#include <cmath>

namespace incompat {

HermitianOperator::HermitianOperator(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("HermitianOperator: matrix must be square and nonempty, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(CMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

bool HermitianOperator::is_real(double eps) const {
  return m_.imag().cwiseAbs().maxCoeff() <= eps;
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator+: dimension mismatch");
  return HermitianOperator(a.entries() + b.entries());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator-: dimension mismatch");
  return HermitianOperator(a.entries() - b.entries());
}

HermitianOperator operator*(double c, const HermitianOperator& a) { return a.scaled(c); }

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("hs_inner: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
  // tr(AB) = sum_ij A_ij conj(B_ij) for Hermitian B; the real part is exact.
  return (a.entries().array() * b.entries().array().conjugate()).sum().real();
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.entries(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.entries(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

std::pair<double, CVector> min_eigenpair(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.entries());
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

HermitianOperator partial_trace_first(const HermitianOperator& a, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1 || a.dim() != dim_a * dim_b) {
    throw DimensionError("partial_trace_first: dim " + std::to_string(a.dim()) +
                         " does not factor as " + std::to_string(dim_a) + "*" +
                         std::to_string(dim_b));
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_a; ++i) {
    out += a.entries().block(i * dim_b, i * dim_b, dim_b, dim_b);
  }
  return HermitianOperator(out);
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const int da = a.dim(), db = b.dim();
  CMatrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a(i, j) * b.entries();
  return HermitianOperator(out);
}

HermitianOperator pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianOperator(m);
}

HermitianOperator pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

HermitianOperator projector(const CVector& v) {
  const double n2 = v.squaredNorm();
  if (n2 <= 0) throw ValidationError("projector: zero vector");
  return HermitianOperator(v * v.adjoint() / n2);
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  const double lam = min_eigenvalue(op_);
  if (lam < -tol::psd) {
    throw ValidationError("DensityOperator: not positive semidefinite, min eigenvalue " +
                          std::to_string(lam));
  }
  if (std::abs(op_.trace() - 1.0) > tol::trace) {
    throw ValidationError("DensityOperator: trace " + std::to_string(op_.trace()) + " != 1");
  }
}

DensityOperator maximally_mixed(int dim) {
  return DensityOperator(HermitianOperator::identity(dim).scaled(1.0 / dim));
}

}  // namespace incompat
