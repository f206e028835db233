#include "incompat/random.hpp"

#include <cmath>

namespace incompat {

int Rng::uniform_int(int n) {
  // Rejection-free for our sizes; bias is negligible for n << 2^53.
  return static_cast<int>(uniform() * n) % n;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on the raw uniform stream.
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> Rng::simplex(int n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) {
    double u = uniform();
    while (u <= 1e-300) u = uniform();
    v = -std::log(u);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

HermitianOperator random_psd(int dim, Rng& rng) {
  CMatrix b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = rng.cnormal();
  return HermitianOperator(b * b.adjoint());
}

DensityOperator random_density(int dim, Rng& rng) {
  HermitianOperator a = random_psd(dim, rng);
  return DensityOperator(a.scaled(1.0 / a.trace()));
}

CMatrix random_unitary(int dim, Rng& rng) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution does not depend on the QR convention.
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CVector random_pure_bipartite(int dim, const std::vector<double>& schmidt_sq, Rng& rng) {
  if (static_cast<int>(schmidt_sq.size()) != dim) {
    throw DimensionError("random_pure_bipartite: need one Schmidt coefficient per dimension");
  }
  const CMatrix u = random_unitary(dim, rng);
  const CMatrix v = random_unitary(dim, rng);
  CVector psi = CVector::Zero(dim * dim);
  for (int k = 0; k < dim; ++k) {
    const double c = std::sqrt(schmidt_sq[k]);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) psi(i * dim + j) += c * u(i, k) * v(j, k);
  }
  psi /= psi.norm();
  return psi;
}

}  // namespace incompat
