#include <doctest.h>

#include "incompat/serialize.hpp"

using namespace incompat;

TEST_SUITE_BEGIN("serialize");

TEST_CASE("hermitian round trip and the im-omission rule") {
  const Json jz = to_json(pauli_z());
  CHECK_FALSE(jz.contains("im"));
  CHECK((hermitian_from_json(jz) - pauli_z()).max_abs() == 0.0);

  const Json jy = to_json(pauli_y());
  CHECK(jy.contains("im"));
  CHECK((hermitian_from_json(jy) - pauli_y()).max_abs() == 0.0);

  Json bad = jz;
  bad["re"] = Json::array({Json::array({1.0})});
  CHECK_THROWS_AS(hermitian_from_json(bad), ValidationError);
}

TEST_CASE("measurement set round trip") {
  const MeasurementSet m = random_measurement_set(3, 2, 3, 2718);
  const MeasurementSet back = measurement_set_from_json(to_json(m));
  REQUIRE(back.settings() == m.settings());
  REQUIRE(back.outcomes() == m.outcomes());
  for (int x = 0; x < m.settings(); ++x)
    for (int a = 0; a < m.outcomes(); ++a)
      CHECK((back.element(a, x) - m.element(a, x)).max_abs() < 1e-15);
  Json j = to_json(m);
  j["outcomes"] = 7;
  CHECK_THROWS_AS(measurement_set_from_json(j), ValidationError);
}

TEST_CASE("game round trip names offending ensembles") {
  Rng rng(1);
  const DiscriminationGame g = random_game(2, 2, 3, rng);
  const DiscriminationGame back = game_from_json(to_json(g));
  CHECK(back.size() == g.size());
  CHECK(back.joint(1, 1) == doctest::Approx(g.joint(1, 1)).epsilon(1e-15));

  Json j = to_json(g);
  j["ensembles"][1]["states"][0]["re"][0][0] = 5.0;  // breaks the trace
  try {
    game_from_json(j);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("ensemble 1") != std::string::npos);
  }
}

TEST_CASE("kernel and assemblage round trips") {
  Rng rng(5);
  const SimulationKernel k = random_kernel(2, 3, 2, 2, rng);
  const SimulationKernel back = kernel_from_json(to_json(k));
  CHECK(back.r(1, 1, 0, 2) == doctest::Approx(k.r(1, 1, 0, 2)).epsilon(1e-15));

  const DensityOperator rho = random_density(4, rng);
  const Assemblage a = assemblage_from(rho, random_measurement_set(2, 2, 2, 3));
  const Assemblage aback = assemblage_from_json(to_json(a));
  CHECK((aback.sigma(1, 0) - a.sigma(1, 0)).max_abs() < 1e-15);
}

TEST_CASE("roi result round trip carries a verified witness") {
  const RoiResult r = roi(qubit_mub_pair());
  const RoiResult back = roi_result_from_json(to_json(r));
  CHECK(back.value == doctest::Approx(r.value).epsilon(1e-10));
  CHECK((back.dual.x_op - r.dual.x_op).max_abs() < 1e-12);
}

TEST_CASE("fixed-digit dump is deterministic and 12-significant") {
  Json j;
  j["a"] = 1.0 / 3.0;
  j["b"] = Json::array({2.0 / 7.0, 1e-12, 123456789.0});
  j["c"] = "text";
  const std::string once = dump_fixed(j, 2);
  const std::string twice = dump_fixed(j, 2);
  CHECK(once == twice);
  CHECK(once.find("0.333333333333") != std::string::npos);
  CHECK(once.find("0.285714285714") != std::string::npos);
}

TEST_CASE("cone program dump lists blocks and rows") {
  ProgramBuilder pb;
  const int v = pb.add_psd_block("V", 2);
  const int s = pb.add_nonneg("s");
  MatrixExpr expr(2);
  expr.add_variable(v);
  expr.add_scalar_times(s, HermitianOperator::identity(2).scaled(-1.0));
  pb.add_matrix_eq(expr, HermitianOperator::zero(2));
  LinearRow obj;
  obj.scalar_terms.emplace_back(s, 1.0);
  pb.set_objective(obj, Sense::Minimize);
  const Json j = dump_program(pb.take());
  CHECK(j["sense"] == "min");
  CHECK(j["blocks"].size() == 2);
  CHECK(j["constraints"].size() == 4);  // d^2 real rows
}

TEST_SUITE_END();
