#include <doctest.h>

#include "incompat/cone_program.hpp"
#include "incompat/random.hpp"

using namespace incompat;

TEST_SUITE_BEGIN("sdp");

namespace {

// min t s.t. t I >= Z, t free. Optimum: largest eigenvalue of Z.
ConeProgram eigmax_program(const HermitianOperator& target) {
  ProgramBuilder pb;
  const int t = pb.add_free("t");
  MatrixExpr expr(target.dim());
  expr.add_scalar_times(t, HermitianOperator::identity(target.dim()));
  pb.add_psd_ge(expr, target, "slack");
  LinearRow obj;
  obj.scalar_terms.emplace_back(t, 1.0);
  pb.set_objective(obj, Sense::Minimize);
  return pb.take();
}

}  // namespace

TEST_CASE("largest eigenvalue of Z via free variable") {
  const ConeSolution sol = solve(eigmax_program(pauli_z()));
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_primal == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.gap <= 1e-8 * (1.0 + std::abs(sol.objective_primal)));
  // slack round-trip: T = tI - Z must be reported PSD
  const int slack = 1;  // blocks: t, slack
  CHECK(min_eigenvalue(sol.matrix_values[slack]) >= -1e-8);
}

TEST_CASE("largest eigenvalue of a random complex Hermitian") {
  Rng rng(21);
  CMatrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.cnormal();
  const HermitianOperator h(g);
  const ConeSolution sol = solve(eigmax_program(h));
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_primal == doctest::Approx(max_eigenvalue(h)).epsilon(1e-7));
}

TEST_CASE("unbounded objective reports dual infeasibility") {
  // min t s.t. S = -t I, S >= 0: feasible for every t <= 0, objective
  // unbounded below.
  ProgramBuilder pb;
  const int t = pb.add_free("t");
  const int s = pb.add_psd_block("S", 2);
  MatrixExpr expr(2);
  expr.add_variable(s);
  expr.add_scalar_times(t, HermitianOperator::identity(2));
  pb.add_matrix_eq(expr, HermitianOperator::zero(2));
  LinearRow obj;
  obj.scalar_terms.emplace_back(t, 1.0);
  pb.set_objective(obj, Sense::Minimize);
  const ConeSolution sol = solve(pb.take());
  REQUIRE(sol.status == SolveStatus::DualInfeasible);
  // improving ray: A x = 0 and objective ray = -1
  CHECK(sol.ray_scalar[t] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK((sol.ray_matrix[s] - HermitianOperator::identity(2)).max_abs() < 1e-6);
}

TEST_CASE("infeasible LP yields a Farkas certificate") {
  // x + y = 1, x + y = 2 with x, y >= 0.
  ProgramBuilder pb;
  const int x = pb.add_nonneg("x");
  const int y = pb.add_nonneg("y");
  LinearRow r1, r2;
  r1.scalar_terms = {{x, 1.0}, {y, 1.0}};
  r1.rhs = 1.0;
  r2.scalar_terms = {{x, 1.0}, {y, 1.0}};
  r2.rhs = 2.0;
  pb.add_row(r1);
  pb.add_row(r2);
  pb.set_objective(LinearRow{}, Sense::Minimize);
  const ConeSolution sol = solve(pb.take());
  REQUIRE(sol.status == SolveStatus::PrimalInfeasible);
  REQUIRE(sol.farkas_y.size() == 2);
  // b'y = 1 and A'y <= 0 on the nonneg columns
  CHECK(sol.farkas_y[0] * 1.0 + sol.farkas_y[1] * 2.0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.farkas_y[0] + sol.farkas_y[1] <= 1e-8);
}

TEST_CASE("feasible LP with equalities") {
  // min x + 2y s.t. x + y = 1: optimum 1 at y = 0.
  ProgramBuilder pb;
  const int x = pb.add_nonneg("x");
  const int y = pb.add_nonneg("y");
  LinearRow r;
  r.scalar_terms = {{x, 1.0}, {y, 1.0}};
  r.rhs = 1.0;
  pb.add_row(r);
  LinearRow obj;
  obj.scalar_terms = {{x, 1.0}, {y, 2.0}};
  pb.set_objective(obj, Sense::Minimize);
  const ConeSolution sol = solve(pb.take());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_primal == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.scalar_values[x] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("realify keeps real programs unchanged") {
  const ConeProgram p = eigmax_program(pauli_z());
  const ConeProgram r = realify(p);
  REQUIRE(r.blocks.size() == p.blocks.size());
  for (size_t i = 0; i < p.blocks.size(); ++i) CHECK(r.blocks[i].dim == p.blocks[i].dim);
}

TEST_CASE("realify embeds complex blocks at twice the dimension") {
  const ConeProgram p = eigmax_program(pauli_y());
  const ConeProgram r = realify(p);
  const int slack = r.find_block("slack");
  REQUIRE(slack >= 0);
  CHECK(r.blocks[slack].dim == 4);
  CHECK(r.blocks[slack].kind == BlockKind::Psd);
}

TEST_CASE("embedded Pauli Y matches the complex eigensolver") {
  const HermitianOperator e = real_embedding(pauli_y());
  REQUIRE(e.dim() == 4);
  CHECK(e.is_real());
  CHECK(min_eigenvalue(e) == doctest::Approx(min_eigenvalue(pauli_y())).epsilon(1e-12));
  // solving with the complex block exercises the same embedding end to end
  const ConeSolution sol = solve(eigmax_program(pauli_y()));
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_primal == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("complex_readback inverts real_embedding") {
  Rng rng(4);
  CMatrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.cnormal();
  const HermitianOperator h(g);
  CHECK((complex_readback(real_embedding(h)) - h).max_abs() < 1e-14);
}

TEST_CASE("strictly feasible program reaches optimal") {
  // min <I, V> s.t. <I, V> + x = 3: strictly feasible on both sides.
  ProgramBuilder pb;
  const int v = pb.add_psd_block("V", 2);
  const int x = pb.add_nonneg("x");
  LinearRow r;
  r.matrix_terms.emplace_back(v, HermitianOperator::identity(2));
  r.scalar_terms.emplace_back(x, 1.0);
  r.rhs = 3.0;
  pb.add_row(r);
  LinearRow obj;
  obj.matrix_terms.emplace_back(v, HermitianOperator::identity(2));
  pb.set_objective(obj, Sense::Minimize);
  const ConeSolution sol = solve(pb.take());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_primal == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("objective scaling scales both reported objectives") {
  Rng rng(9);
  CMatrix g(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = rng.cnormal();
  const HermitianOperator h(g);
  for (double k : {2.0, 17.5}) {
    const ConeSolution base = solve(eigmax_program(h));
    const ConeSolution scaled = solve(eigmax_program(h.scaled(k)));
    REQUIRE(base.status == SolveStatus::Optimal);
    REQUIRE(scaled.status == SolveStatus::Optimal);
    CHECK(scaled.objective_primal ==
          doctest::Approx(k * base.objective_primal).epsilon(1e-7));
    CHECK(scaled.objective_dual == doctest::Approx(k * base.objective_dual).epsilon(1e-7));
  }
}

TEST_CASE("maximisation sense") {
  // max <Y, R> s.t. tr R = 1, R >= 0: the largest eigenvalue of Y.
  ProgramBuilder pb;
  const int r = pb.add_psd_block("R", 2);
  LinearRow tr_row;
  tr_row.matrix_terms.emplace_back(r, HermitianOperator::identity(2));
  tr_row.rhs = 1.0;
  pb.add_row(tr_row);
  LinearRow obj;
  obj.matrix_terms.emplace_back(r, pauli_y());
  pb.set_objective(obj, Sense::Maximize);
  const ConeSolution sol = solve(pb.take());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_primal == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(min_eigenvalue(sol.matrix_values[r]) >= -1e-8);
  CHECK(sol.matrix_values[r].trace() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("dimension cap is enforced") {
  ProgramBuilder pb;
  const int v = pb.add_psd_block("V", 30);
  LinearRow r;
  r.matrix_terms.emplace_back(v, HermitianOperator::identity(30));
  r.rhs = 1.0;
  pb.add_row(r);
  pb.set_objective(LinearRow{}, Sense::Minimize);
  SolverSettings st;
  st.dim_cap = 100;
  CHECK_THROWS_AS(solve(pb.take(), st), ValidationError);
}

TEST_SUITE_END();
