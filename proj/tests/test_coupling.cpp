#include <doctest.h>

#include <cmath>

#include "thinspec/coupling.hpp"

using thinspec::clebsch_gordan;
using thinspec::staggered_order_element;

namespace {

// Independent oracle: the staggered element as an explicit Clebsch-Gordan
// sum over sublattice magnetizations,
//   <S', 0| S_A^z - S_B^z |S, 0> = sum_m 2m C(s,m;s,-m|S',0) C(s,m;s,-m|S,0).
double staggered_element_cg_sum(double s, int total_spin) {
  double total = 0.0;
  for (double m = -s; m <= s + 1e-9; m += 1.0) {
    total += 2.0 * m * clebsch_gordan(s, m, s, -m, total_spin + 1, 0.0) *
             clebsch_gordan(s, m, s, -m, total_spin, 0.0);
  }
  return total;
}

}  // namespace

TEST_CASE("two spin-1/2 coupling basics") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == doctest::Approx(r).epsilon(1e-14));
  CHECK(clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0, 0) == doctest::Approx(-r).epsilon(1e-14));
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1, 0) == doctest::Approx(r).epsilon(1e-14));
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, 0.5, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("selection rules give zero") {
  CHECK(clebsch_gordan(1, 1, 1, 1, 1, 0) == 0.0);   // m1+m2 != M
  CHECK(clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0);   // J > j1+j2
  CHECK(clebsch_gordan(2, 0, 0.5, 0, 1, 0) == 0.0); // J < |j1-j2|
  CHECK(clebsch_gordan(1, 1.5, 1, -1.5, 1, 0) == 0.0);
}

TEST_CASE("orthogonality of coupled states") {
  // sum over (m1, m2) of C(j1 m1; j2 m2 | J M) C(j1 m1; j2 m2 | J' M) = delta
  const double j1 = 1.5, j2 = 1.0;
  for (int twoJ = 1; twoJ <= 5; twoJ += 2) {
    for (int twoJp = 1; twoJp <= 5; twoJp += 2) {
      const double J = twoJ / 2.0, Jp = twoJp / 2.0;
      double sum = 0.0;
      for (double m1 = -j1; m1 <= j1 + 1e-9; m1 += 1.0) {
        for (double m2 = -j2; m2 <= j2 + 1e-9; m2 += 1.0) {
          if (std::abs(m1 + m2 - 0.5) > 1e-9) continue;
          sum += clebsch_gordan(j1, m1, j2, m2, J, 0.5) * clebsch_gordan(j1, m1, j2, m2, Jp, 0.5);
        }
      }
      CHECK(sum == doctest::Approx(J == Jp ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("staggered element: two single-spin sublattices") {
  // (S_A^z - S_B^z)|0,0> = |1,0> for two spins 1/2
  CHECK(staggered_order_element(0.5, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("staggered element: spin-1 sublattices by hand") {
  CHECK(staggered_order_element(1.0, 0) ==
        doctest::Approx(2.0 * std::sqrt(2.0) / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(staggered_order_element(1.0, 1) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("staggered element matches the Clebsch-Gordan sum") {
  for (double s : {0.5, 1.0, 2.0, 3.0, 5.0, 10.0}) {
    for (int total = 0; total < static_cast<int>(2 * s); ++total) {
      CAPTURE(s);
      CAPTURE(total);
      CHECK(staggered_order_element(s, total) ==
            doctest::Approx(staggered_element_cg_sum(s, total)).epsilon(1e-11));
    }
  }
}

TEST_CASE("staggered element argument checks") {
  CHECK_THROWS_AS(staggered_order_element(0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(staggered_order_element(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(staggered_order_element(1.0, -1), std::invalid_argument);
}
