#include "thinspec/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace thinspec {

namespace {

double log_factorial(double n) { return std::lgamma(n + 1.0); }

bool is_half_integral(double x) {
  return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-9;
}

bool is_integral(double x) { return std::abs(x - std::round(x)) < 1e-9; }

}  // namespace

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
  if (!is_half_integral(j1) || !is_half_integral(j2) || !is_half_integral(J) ||
      !is_half_integral(m1) || !is_half_integral(m2) || !is_half_integral(M)) {
    throw std::invalid_argument("clebsch_gordan: arguments must be (half-)integral");
  }
  if (j1 < 0 || j2 < 0 || J < 0) return 0.0;
  if (std::abs(m1) > j1 + 1e-9 || std::abs(m2) > j2 + 1e-9 || std::abs(M) > J + 1e-9) return 0.0;
  if (std::abs(m1 + m2 - M) > 1e-9) return 0.0;
  if (J < std::abs(j1 - j2) - 1e-9 || J > j1 + j2 + 1e-9) return 0.0;
  // j - m must be integral within each multiplet
  if (!is_integral(j1 - m1) || !is_integral(j2 - m2) || !is_integral(J - M) ||
      !is_integral(j1 + j2 - J)) {
    return 0.0;
  }

  const double pref =
      0.5 * (std::log(2.0 * J + 1.0) + log_factorial(J + j1 - j2) + log_factorial(J - j1 + j2) +
             log_factorial(j1 + j2 - J) - log_factorial(j1 + j2 + J + 1.0) +
             log_factorial(J + M) + log_factorial(J - M) + log_factorial(j1 - m1) +
             log_factorial(j1 + m1) + log_factorial(j2 - m2) + log_factorial(j2 + m2));

  const int kmin = static_cast<int>(std::round(std::max(0.0, std::max(j2 - J - m1, j1 + m2 - J))));
  const int kmax = static_cast<int>(std::round(std::min(j1 + j2 - J, std::min(j1 - m1, j2 + m2))));

  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double lt = log_factorial(k) + log_factorial(j1 + j2 - J - k) +
                      log_factorial(j1 - m1 - k) + log_factorial(j2 + m2 - k) +
                      log_factorial(J - j2 + m1 + k) + log_factorial(J - j1 - m2 + k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(pref - lt);
  }
  return sum;
}

double staggered_order_element(double sublattice_spin, int total_spin) {
  const double s = sublattice_spin;
  const double S = total_spin;
  if (s < 0.5 || !is_half_integral(s)) {
    throw std::invalid_argument("staggered_order_element: sublattice_spin must be >= 1/2");
  }
  if (total_spin < 0 || S + 1 > 2.0 * s + 1e-9) {
    throw std::invalid_argument("staggered_order_element: total_spin outside 0..2s-1");
  }
  const double top = (2.0 * s + 1.0) * (2.0 * s + 1.0) - (S + 1.0) * (S + 1.0);
  return (S + 1.0) * std::sqrt(top / ((2.0 * S + 1.0) * (2.0 * S + 3.0)));
}

}  // namespace thinspec
