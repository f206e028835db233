#include <doctest.h>

#include <cmath>

#include "incompat/incompatibility.hpp"
#include "incompat/oracle.hpp"

using namespace incompat;

namespace {

MeasurementSet zz_pair() {
  const Povm z = qubit_mub_pair().povm(0);
  return MeasurementSet({z, z});
}

DiscriminationGame mub_game() {
  const MeasurementSet zx = qubit_mub_pair();
  auto ens = [&](int x) {
    return Ensemble({DensityOperator(zx.element(0, x)), DensityOperator(zx.element(1, x))},
                    {0.5, 0.5});
  };
  return DiscriminationGame({ens(0), ens(1)}, {0.5, 0.5});
}

MeasurementSet relabel_outcomes(const MeasurementSet& m, int x_swap) {
  std::vector<Povm> povms;
  for (int x = 0; x < m.settings(); ++x) {
    std::vector<HermitianOperator> els = m.povm(x).elements();
    if (x == x_swap) std::swap(els[0], els[1]);
    povms.emplace_back(m.dim(), std::move(els));
  }
  return MeasurementSet(std::move(povms));
}

}  // namespace

TEST_SUITE_BEGIN("incompatibility");

TEST_CASE("jm_feasibility on identical and incompatible pairs") {
  const JmResult same = jm_feasibility(zz_pair());
  REQUIRE(same.jointly_measurable);
  REQUIRE(same.parent.has_value());
  // the parent reproduces the measurements through the deterministic table
  const auto strings = deterministic_table(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      HermitianOperator sum = HermitianOperator::zero(2);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(a, x)) sum = sum + same.parent->element(i);
      CHECK((sum - zz_pair().element(a, x)).max_abs() < 1e-7);
    }

  CHECK_FALSE(jm_feasibility(qubit_mub_pair()).jointly_measurable);
}

TEST_CASE("jm_feasibility matches the smeared threshold region") {
  // eta = 0.5 is comfortably inside the compatible region (threshold 1/sqrt 2);
  // the brute-force search confirms the same instance.
  CHECK(jm_feasibility(smeared_mub_pair(0.5)).jointly_measurable);
  CHECK(brute_jm(smeared_mub_pair(0.5), 6, 17));
  CHECK_FALSE(jm_feasibility(smeared_mub_pair(0.9)).jointly_measurable);
}

TEST_CASE("roi_primal on compatible sets returns s = 1") {
  auto [s, parent] = roi_primal(zz_pair());
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(parent.scale() == doctest::Approx(1.0).epsilon(1e-8));
  const MeasurementSet jm = random_compatible_set(3, 2, 3, 123);
  CHECK(roi_primal(jm).first == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("roi anchors for the qubit MUB pair and trio") {
  // 1 + I_R({Z,X}) = 4 - 2 sqrt 2, derived in closed form and cross-checked
  // against the brute-force oracles elsewhere in this suite.
  auto [s, parent] = roi_primal(qubit_mub_pair());
  CHECK(s == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-7));
  auto [v, witness] = roi_dual(qubit_mub_pair());
  CHECK(std::abs(s - v) <= 1e-7);

  // trio: 1 + I_R = 3 - sqrt 3, the reciprocal of the compatible value
  // (1 + 1/sqrt 3)/2 for guessing all three Pauli bases; confirmed by the
  // certified primal/dual pair and by the brute-force game oracle.
  const RoiResult trio = roi(qubit_mub_trio());
  CHECK(trio.value == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-7));
  CHECK(trio.gap <= 1e-7);
  auto tens = [&](int x) {
    return Ensemble({DensityOperator(qubit_mub_trio().element(0, x)),
                     DensityOperator(qubit_mub_trio().element(1, x))},
                    {0.5, 0.5});
  };
  const DiscriminationGame tgame({tens(0), tens(1), tens(2)}, {1 / 3.0, 1 / 3.0, 1 / 3.0});
  const double pc = p_guess_compatible(tgame).first;
  CHECK(pc == doctest::Approx(0.5 * (1.0 + 1.0 / std::sqrt(3.0))).epsilon(1e-7));
  CHECK(p_guess(tgame, qubit_mub_trio()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(1.0 / pc == doctest::Approx(1.0 + trio.value).epsilon(1e-6));
}

TEST_CASE("roi_dual is invariant under outcome relabeling") {
  const MeasurementSet m = random_measurement_set(2, 2, 2, 2027);
  const double v1 = roi_dual(m).first;
  const double v2 = roi_dual(relabel_outcomes(m, 1)).first;
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-8));
}

TEST_CASE("roi on explicit strictly feasible instances stays certified") {
  for (int t = 0; t < 6; ++t) {
    const MeasurementSet m = random_measurement_set(2 + t % 2, 2, 2, 3000 + t);
    const RoiResult r = roi(m);
    CHECK(r.gap <= 1e-7);
    CHECK(r.value >= -1e-9);
  }
}

TEST_CASE("faithfulness on constructed compatible sets") {
  for (int t = 0; t < 10; ++t) {
    const MeasurementSet jm = random_compatible_set(2 + t % 2, 2 + t % 2, 2, 4000 + t);
    CHECK(roi(jm).value <= 1e-6);
  }
}

TEST_CASE("convexity of the robustness") {
  Rng rng(41);
  for (int t = 0; t < 8; ++t) {
    const MeasurementSet m1 = random_measurement_set(2, 2, 2, 5000 + t);
    const MeasurementSet m2 = random_measurement_set(2, 2, 2, 6000 + t);
    const double p = rng.uniform();
    const double mixed = roi(mix(m1, m2, p)).value;
    CHECK(mixed <= p * roi(m1).value + (1.0 - p) * roi(m2).value + 1e-6);
  }
  // mixing toward the trivial set can only reduce the robustness linearly
  Rng prng(42);
  for (int t = 0; t < 4; ++t) {
    const double p = prng.uniform();
    const double mixed = roi(smeared_mub_pair(p)).value;
    CHECK(mixed <= p * roi(qubit_mub_pair()).value + 1e-6);
  }
}

TEST_CASE("post-processing monotonicity") {
  Rng rng(43);
  for (int t = 0; t < 8; ++t) {
    const MeasurementSet m = random_measurement_set(2, 2, 2, 7000 + t);
    const SimulationKernel k = random_kernel(2, 2, 2, 2, rng);
    CHECK(roi(apply_simulation(m, k)).value <= roi(m).value + 1e-6);
  }
}

TEST_CASE("optimal game from the dual witness") {
  const RoiResult r = roi(qubit_mub_pair());
  const DiscriminationGame game = optimal_game_from_dual(r.dual);
  REQUIRE(game.size() == 2);
  REQUIRE(game.ensemble(0).size() == 2);

  // N* and the canonical measure-y-guess-a strategy value (1 + I_R)/N*
  double nstar = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) nstar += r.dual.omega[x][a].trace();
  double strategy_value = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      strategy_value += game.joint(a, x) * hs_inner(game.ensemble(x).state(a).op(),
                                                    qubit_mub_pair().element(a, x));
  CHECK(strategy_value == doctest::Approx((1.0 + r.value) / nstar).epsilon(1e-7));

  // P_g^C on the optimal game equals 1/N*
  CHECK(p_guess_compatible(game).first == doctest::Approx(1.0 / nstar).epsilon(1e-6));

  // the headline identity: advantage on this game equals 1 + I_R
  CHECK(advantage(game, qubit_mub_pair()) == doctest::Approx(1.0 + r.value).epsilon(1e-5));
}

TEST_CASE("optimal game identity on random incompatible sets") {
  int done = 0;
  for (int t = 0; done < 5 && t < 20; ++t) {
    const MeasurementSet m = random_measurement_set(2, 2, 2, 8000 + t);
    const RoiResult r = roi(m);
    if (r.value < 1e-4) continue;
    ++done;
    const DiscriminationGame game = optimal_game_from_dual(r.dual);
    CHECK(advantage(game, m) == doctest::Approx(1.0 + r.value).epsilon(1e-5));
  }
  CHECK(done == 5);
}

TEST_CASE("degenerate witness is rejected") {
  DualWitness w{HermitianOperator::identity(2).scaled(0.5),
                {{HermitianOperator::zero(2), HermitianOperator::zero(2)},
                 {HermitianOperator::zero(2), HermitianOperator::zero(2)}}};
  CHECK_THROWS_AS(optimal_game_from_dual(w), ValidationError);
}

TEST_CASE("noise povm reconstruction") {
  const MeasurementSet m = qubit_mub_pair();
  const RoiResult r = roi(m);
  const MeasurementSet noise = noise_povm(r, m);
  // mixing back with weight r reproduces the compatible smoothing
  const auto strings = deterministic_table(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      HermitianOperator cover = HermitianOperator::zero(2);
      for (size_t i = 0; i < strings.size(); ++i)
        if (strings[i].selects(a, x)) cover = cover + r.primal.element(i);
      const HermitianOperator lhs =
          (m.element(a, x) + r.value * noise.element(a, x)).scaled(1.0 / (1.0 + r.value));
      CHECK((lhs - cover.scaled(1.0 / (1.0 + r.value))).max_abs() < 1e-7);
    }
  // compatible sets return the measurements themselves
  const MeasurementSet jm = zz_pair();
  const RoiResult rj = roi(jm);
  const MeasurementSet nj = noise_povm(rj, jm);
  CHECK((nj.element(0, 0) - jm.element(0, 0)).max_abs() == 0.0);
}

TEST_SUITE_END();
