#include <doctest.h>

#include "incompat/hermitian.hpp"
#include "incompat/random.hpp"

using namespace incompat;

namespace {

CVector basis(int dim, int k) {
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

HermitianOperator random_hermitian(int d, Rng& rng) {
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.cnormal();
  return HermitianOperator(m);
}

}  // namespace

TEST_SUITE_BEGIN("hermitian");

TEST_CASE("construction symmetrises and rejects bad shapes") {
  CMatrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), 0.0, 2.0;
  HermitianOperator h(m);
  CHECK(h(0, 1) == Complex(0.0, 0.5));
  CHECK(h(1, 0) == Complex(0.0, -0.5));
  CHECK_THROWS_AS(HermitianOperator(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("hs_inner examples") {
  const HermitianOperator eye = HermitianOperator::identity(2);
  CHECK(hs_inner(eye, eye) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hs_inner(pauli_z(), pauli_x()) == doctest::Approx(0.0).epsilon(1e-14));
  const HermitianOperator p0 = projector(basis(2, 0));
  const HermitianOperator zp((HermitianOperator::identity(2) + pauli_z()).scaled(0.5));
  CHECK(hs_inner(p0, zp) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(hs_inner(eye, HermitianOperator::identity(3)), DimensionError);
}

TEST_CASE("hs_inner is a real inner product") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 3;
    const HermitianOperator a = random_hermitian(d, rng);
    const HermitianOperator b = random_hermitian(d, rng);
    const HermitianOperator c = random_hermitian(d, rng);
    CHECK(hs_inner(a, b) == doctest::Approx(hs_inner(b, a)).epsilon(1e-12));
    const double lhs = hs_inner(a + 2.0 * b, c);
    CHECK(lhs == doctest::Approx(hs_inner(a, c) + 2.0 * hs_inner(b, c)).epsilon(1e-10));
    CHECK(hs_inner(a, a) >= 0.0);
  }
}

TEST_CASE("min_eigenvalue examples") {
  CHECK(min_eigenvalue(HermitianOperator::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(pauli_z()) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(HermitianOperator::zero(3)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("min_eigenvalue shift invariant") {
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const HermitianOperator a = random_hermitian(3, rng);
    const double c = 3.0 * rng.normal();
    const double shifted = min_eigenvalue(a + HermitianOperator::identity(3).scaled(c));
    CHECK(std::abs(shifted - (min_eigenvalue(a) + c)) < 1e-9);
  }
}

TEST_CASE("min_eigenpair") {
  {
    auto [lam, v] = min_eigenpair(pauli_z());
    CHECK(lam == doctest::Approx(-1.0));
    CHECK(std::abs(v(1)) == doctest::Approx(1.0));
    CHECK(std::abs(v(0)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  {
    auto [lam, v] = min_eigenpair(pauli_x());
    CHECK(lam == doctest::Approx(-1.0));
    // (|0> - |1>)/sqrt(2) up to phase
    CHECK(std::abs(v(0) + v(1)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(v(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  {
    CMatrix m = CMatrix::Zero(3, 3);
    m(0, 0) = 3;
    m(1, 1) = 1;
    m(2, 2) = 2;
    auto [lam, v] = min_eigenpair(HermitianOperator(m));
    CHECK(lam == doctest::Approx(1.0));
    CHECK(std::abs(v(1)) == doctest::Approx(1.0));
  }
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const HermitianOperator a = random_hermitian(4, rng);
    auto [lam, v] = min_eigenpair(a);
    CHECK((a.entries() * v - lam * v).norm() < 1e-10 * std::max(1.0, a.frobenius_norm()));
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("partial trace examples") {
  // Bell projector
  CVector phi = CVector::Zero(4);
  phi(0) = 1.0 / std::sqrt(2.0);
  phi(3) = 1.0 / std::sqrt(2.0);
  const HermitianOperator bell = projector(phi);
  const HermitianOperator red = partial_trace_first(bell, 2, 2);
  CHECK((red - HermitianOperator::identity(2).scaled(0.5)).max_abs() < 1e-14);

  Rng rng(5);
  const DensityOperator rho = random_density(2, rng);
  const DensityOperator sig = random_density(3, rng);
  const HermitianOperator prod = kron(rho.op(), sig.op());
  CHECK((partial_trace_first(prod, 2, 3) - sig.op()).max_abs() < 1e-12);

  // (|0><0| x I) Phi+ traced over the first factor: direct 4x4 computation
  // gives |0><0| / 2.
  const HermitianOperator m(kron(projector(basis(2, 0)), HermitianOperator::identity(2)).entries() *
                            bell.entries());
  const HermitianOperator expected = projector(basis(2, 0)).scaled(0.5);
  CHECK((partial_trace_first(m, 2, 2) - expected).max_abs() < 1e-14);

  CHECK_THROWS_AS(partial_trace_first(bell, 3, 2), DimensionError);
}

TEST_CASE("partial trace is linear and trace preserving") {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    const HermitianOperator a = random_hermitian(6, rng);
    const HermitianOperator b = random_hermitian(6, rng);
    const double c = rng.normal();
    const HermitianOperator lhs = partial_trace_first(a + c * b, 2, 3);
    const HermitianOperator rhs = partial_trace_first(a, 2, 3) + c * partial_trace_first(b, 2, 3);
    CHECK((lhs - rhs).max_abs() < 1e-10);
    CHECK(partial_trace_first(a, 3, 2).trace() == doctest::Approx(a.trace()).epsilon(1e-12));
  }
}

TEST_CASE("density operator validation") {
  CHECK_THROWS_AS(DensityOperator{pauli_z()}, ValidationError);
  CHECK_THROWS_AS(DensityOperator{HermitianOperator::identity(2)}, ValidationError);
  CHECK_NOTHROW(DensityOperator(HermitianOperator::identity(2).scaled(0.5)));
  CHECK(maximally_mixed(3).op().trace() == doctest::Approx(1.0));
}

TEST_SUITE_END();
