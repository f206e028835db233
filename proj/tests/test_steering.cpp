#include <doctest.h>

#include <cmath>

#include "incompat/steering.hpp"

using namespace incompat;

namespace {

DensityOperator max_entangled(int d) {
  CVector psi = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return DensityOperator(projector(psi));
}

DensityOperator product_state(Rng& rng, int da, int db) {
  return DensityOperator(kron(random_density(da, rng).op(), random_density(db, rng).op()));
}

}  // namespace

TEST_SUITE_BEGIN("steering");

TEST_CASE("assemblage from the maximally entangled state and Z") {
  const MeasurementSet z({qubit_mub_pair().povm(0)});
  const Assemblage a = assemblage_from(max_entangled(2), z);
  const HermitianOperator p0 = projector(CVector::Unit(2, 0)).scaled(0.5);
  const HermitianOperator p1 = projector(CVector::Unit(2, 1)).scaled(0.5);
  CHECK((a.sigma(0, 0) - p0).max_abs() < 1e-12);
  CHECK((a.sigma(1, 0) - p1).max_abs() < 1e-12);
}

TEST_CASE("assemblage from a product state factorises") {
  Rng rng(3);
  const DensityOperator rho_a = random_density(2, rng);
  const DensityOperator rho_b = random_density(3, rng);
  const DensityOperator rho(kron(rho_a.op(), rho_b.op()));
  const MeasurementSet m = random_measurement_set(2, 2, 2, 11);
  const Assemblage a = assemblage_from(rho, m);
  for (int x = 0; x < 2; ++x)
    for (int o = 0; o < 2; ++o) {
      const HermitianOperator expect =
          rho_b.op().scaled(hs_inner(m.element(o, x), rho_a.op()));
      CHECK((a.sigma(o, x) - expect).max_abs() < 1e-12);
    }
}

TEST_CASE("no-signalling of constructed assemblages") {
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const DensityOperator rho = random_density(4, rng);
    const MeasurementSet m = random_measurement_set(2, 2, 2, 100 + t);
    const Assemblage a = assemblage_from(rho, m);
    CHECK(a.no_signalling_residual() < 1e-12);
    CHECK(std::abs(a.reduced_state().trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("lhs feasibility") {
  Rng rng(9);
  const MeasurementSet zx = qubit_mub_pair();
  // product states never steer
  CHECK(lhs_feasibility(assemblage_from(product_state(rng, 2, 2), zx)));
  // incompatible measurements on a full-Schmidt-rank pure state steer
  CHECK_FALSE(lhs_feasibility(assemblage_from(max_entangled(2), zx)));
  // compatible measurements never steer, on any state
  const MeasurementSet jm = random_compatible_set(2, 2, 2, 21);
  for (int t = 0; t < 3; ++t) {
    const DensityOperator rho = random_density(4, rng);
    CHECK(lhs_feasibility(assemblage_from(rho, jm)));
  }
}

TEST_CASE("consistent steering robustness anchors") {
  Rng rng(31);
  const MeasurementSet zx = qubit_mub_pair();
  // faithful at LHS assemblages
  CHECK(consistent_steering_robustness(assemblage_from(product_state(rng, 2, 2), zx)) <= 1e-7);
  // tight at the maximally entangled state
  const double src = consistent_steering_robustness(assemblage_from(max_entangled(2), zx));
  const double ir = roi(zx).value;
  CHECK(src == doctest::Approx(ir).epsilon(1e-5));
}

TEST_CASE("src lower-bounds the robustness for random pairs") {
  Rng rng(33);
  for (int t = 0; t < 6; ++t) {
    const int d = 2 + t % 2;
    const DensityOperator rho = random_density(d * d, rng);
    const MeasurementSet m = random_measurement_set(d, 2, 2, 500 + t);
    const double src = consistent_steering_robustness(assemblage_from(rho, m));
    CHECK(src <= roi(m).value + 1e-6);
  }
}

TEST_CASE("tightness for random full-Schmidt-rank pure states") {
  Rng rng(35);
  for (int t = 0; t < 4; ++t) {
    const int d = 2 + t % 2;
    std::vector<double> schmidt = rng.simplex(d);
    for (double& s : schmidt) s = 0.1 + 0.9 * s;  // keep every coefficient away from zero
    double norm = 0.0;
    for (double s : schmidt) norm += s;
    for (double& s : schmidt) s /= norm;
    const DensityOperator rho(projector(random_pure_bipartite(d, schmidt, rng)));
    const MeasurementSet m = random_measurement_set(d, 2, 2, 800 + t);
    const double src = consistent_steering_robustness(assemblage_from(rho, m));
    CHECK(src == doctest::Approx(roi(m).value).epsilon(1e-5));
  }
}

TEST_CASE("src vanishes exactly on the lhs boundary decision") {
  Rng rng(37);
  for (int t = 0; t < 6; ++t) {
    const int d = 2;
    const DensityOperator rho =
        t % 2 == 0 ? random_density(d * d, rng) : product_state(rng, d, d);
    const MeasurementSet m = t % 3 == 0 ? random_compatible_set(d, 2, 2, 900 + t)
                                        : random_measurement_set(d, 2, 2, 900 + t);
    const Assemblage a = assemblage_from(rho, m);
    const bool lhs = lhs_feasibility(a);
    const double src = consistent_steering_robustness(a);
    if (lhs) {
      CHECK(src <= 1e-7);
    } else {
      CHECK(src > 1e-7);
    }
  }
}

TEST_SUITE_END();
