#include <doctest.h>

#include <cmath>

#include "thinspec/coupling.hpp"
#include "thinspec/model.hpp"

using namespace thinspec;

TEST_CASE("ladder energies") {
  const auto m = build_ladder_model(100, 20, 1.0);
  CHECK(m.energies[0] == 0.0);
  CHECK(m.energies[1] == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(m.energies[2] == doctest::Approx(0.06).epsilon(1e-15));
  CHECK(m.order_param(0, 1) == 25.0);
  CHECK(m.order_param(1, 0) == 25.0);
  CHECK(m.order_param(0, 0) == 0.0);
  CHECK(m.kind == ModelKind::Ladder);
}

TEST_CASE("doubling N halves every ladder spacing exactly") {
  const auto a = build_ladder_model(100, 20, 1.0);
  const auto b = build_ladder_model(200, 20, 1.0);
  CHECK(b.energies[1] == doctest::Approx(0.01).epsilon(1e-15));
  for (int n = 0; n + 1 < 20; ++n) {
    const double da = a.energies[n + 1] - a.energies[n];
    const double db = b.energies[n + 1] - b.energies[n];
    CHECK(da == 2.0 * db);  // exact in binary: J n(n+1) is integer-scaled
  }
}

TEST_CASE("spacing times N is independent of N") {
  for (ModelKind kind : {ModelKind::Ladder, ModelKind::LiebMattis}) {
    const int cutoff = 5;
    const auto a = kind == ModelKind::Ladder ? build_ladder_model(64, cutoff, 1.0)
                                             : build_lieb_mattis_model(64, cutoff, 1.0);
    const auto b = kind == ModelKind::Ladder ? build_ladder_model(512, cutoff, 1.0)
                                             : build_lieb_mattis_model(512, cutoff, 1.0);
    for (int n = 0; n + 1 < cutoff; ++n) {
      const double sa = (a.energies[n + 1] - a.energies[n]) * 64;
      const double sb = (b.energies[n + 1] - b.energies[n]) * 512;
      CHECK(sa == doctest::Approx(sb).epsilon(1e-12));
    }
  }
}

TEST_CASE("builder preconditions") {
  CHECK_THROWS_WITH_AS(build_ladder_model(100, 1, 1.0), doctest::Contains("cutoff"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_ladder_model(1, 8, 1.0), doctest::Contains("n_particles"),
                       std::invalid_argument);
  CHECK_THROWS_AS(build_ladder_model(100, 8, 0.0), std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_lieb_mattis_model(6, 2, 1.0), doctest::Contains("divisible"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_lieb_mattis_model(8, 6, 1.0), doctest::Contains("sector"),
                       std::invalid_argument);
}

TEST_CASE("lieb-mattis couplings come from the angular-momentum elements") {
  const auto m = build_lieb_mattis_model(16, 5, 1.0);
  for (int n = 0; n + 1 < 5; ++n) {
    CHECK(m.order_param(n, n + 1) == staggered_order_element(4.0, n));
    CHECK(m.order_param(n + 1, n) == m.order_param(n, n + 1));
  }
  CHECK(m.order_param.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetric ground state is the n=0 basis vector with zero order") {
  for (const auto& m : {build_ladder_model(100, 16, 1.0), build_lieb_mattis_model(8, 4, 1.0)}) {
    const QuantumState g = symmetric_ground_state(m);
    CHECK(g.amplitudes()[0] == Complex(1.0, 0.0));
    CHECK(g.amplitudes().tail(m.cutoff - 1).norm() == 0.0);
    CHECK(order_parameter_expectation(m, g) == 0.0);
  }
}

TEST_CASE("broken ground state at b=0 equals the symmetric state exactly") {
  const auto m = build_ladder_model(128, 32, 1.0);
  const EquilibriumResult eq = broken_ground_state(m, 0.0);
  CHECK(eq.state.amplitudes() == symmetric_ground_state(m).amplitudes());
  CHECK(eq.order_expectation == 0.0);
  CHECK(eq.energy == m.energies[0]);
  CHECK_FALSE(eq.truncation_warning);
}

TEST_CASE("broken ground state rejects negative fields") {
  const auto m = build_ladder_model(128, 32, 1.0);
  CHECK_THROWS_AS(broken_ground_state(m, -1e-3), std::invalid_argument);
}

TEST_CASE("strong field orders the wavepacket") {
  // dimensionless field kappa = b (N/4) / E_1 = 1e3
  const auto m = build_ladder_model(1000, 200, 1.0);
  const double b = 1e3 * m.energies[1] / (1000.0 / 4.0);
  const EquilibriumResult eq = broken_ground_state(m, b);
  CHECK(std::abs(eq.order_expectation) / 250.0 >= 0.9);
  CHECK(eq.order_expectation < 0.0);  // favoured branch sign convention
  CHECK_FALSE(eq.truncation_warning);
}

TEST_CASE("order and participation ratio grow with the field") {
  const auto m = build_ladder_model(100, 64, 1.0);
  double last_order = 0.0;
  double last_pr = 1.0;
  for (double kappa : {0.0, 0.5, 2.0, 8.0, 32.0, 128.0, 512.0}) {
    const double b = kappa * m.energies[1] / 25.0;
    const EquilibriumResult eq = broken_ground_state(m, b);
    CHECK(std::abs(eq.order_expectation) >= last_order - 1e-12);
    CHECK(eq.state.participation_ratio() >= last_pr - 1e-12);
    last_order = std::abs(eq.order_expectation);
    last_pr = eq.state.participation_ratio();
  }
}

TEST_CASE("truncation warning fires when the packet hits the retained top") {
  const auto m = build_ladder_model(4096, 64, 1.0);
  const double b = 64.0 / 4096.0;  // N b = 64, wide packet vs cutoff 64
  CHECK(broken_ground_state(m, b).truncation_warning);
  const auto wide = build_ladder_model(4096, 96, 1.0);
  CHECK_FALSE(broken_ground_state(wide, b).truncation_warning);
}

TEST_CASE("order parameter expectation on explicit superpositions") {
  const auto m = build_ladder_model(100, 16, 1.0);
  ComplexVector v = ComplexVector::Zero(16);
  v[0] = v[1] = 1.0 / std::sqrt(2.0);
  CHECK(order_parameter_expectation(m, QuantumState(v)) == doctest::Approx(25.0).epsilon(1e-14));
  v[1] = -v[1];
  CHECK(order_parameter_expectation(m, QuantumState(v)) == doctest::Approx(-25.0).epsilon(1e-14));

  ComplexVector wrong = ComplexVector::Zero(8);
  wrong[0] = 1.0;
  CHECK_THROWS_AS(order_parameter_expectation(m, QuantumState(wrong)), std::invalid_argument);
}

TEST_CASE("deterministic construction") {
  const auto a = build_lieb_mattis_model(32, 12, 1.0);
  const auto b = build_lieb_mattis_model(32, 12, 1.0);
  CHECK(a.energies == b.energies);
  CHECK(a.order_param == b.order_param);
}

TEST_CASE("quantum state guards") {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = 0.5;
  CHECK_THROWS_AS(QuantumState{v}, std::invalid_argument);
  CHECK(QuantumState(v, true).amplitudes()[0] == Complex(1.0, 0.0));
  CHECK_THROWS_AS(QuantumState(ComplexVector::Zero(3), true), std::invalid_argument);
}
