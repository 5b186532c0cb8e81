#pragma once

namespace thinspec {

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> in the Condon-Shortley
// convention. Racah's single-sum formula with log-factorials; spins and
// projections may be half-integral. Accurate to ~1e-12 for j up to a few
// tens; not intended for very large j.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

// Staggered-magnetization matrix element between adjacent total-spin states
// of two coupled spins s = sublattice_spin:
//   <S+1, m=0 | S_A^z - S_B^z | S, m=0>
//     = (S+1) sqrt( ((2s+1)^2 - (S+1)^2) / ((2S+1)(2S+3)) ).
// Equals the Clebsch-Gordan sum  sum_m 2m C(s,m;s,-m|S+1,0) C(s,m;s,-m|S,0)
// but is stable for arbitrarily large s.
double staggered_order_element(double sublattice_spin, int total_spin);

}  // namespace thinspec
