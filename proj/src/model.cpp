#include "thinspec/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "thinspec/coupling.hpp"
#include "thinspec/errors.hpp"

namespace thinspec {

namespace {

Vector tower_energies(int n_particles, int cutoff, double coupling_j) {
  Vector e(cutoff);
  for (int n = 0; n < cutoff; ++n) {
    e[n] = coupling_j * static_cast<double>(n) * (n + 1) / n_particles;
  }
  return e;
}

Matrix tridiagonal_from_offdiag(const Vector& offdiag) {
  const Eigen::Index m = offdiag.size() + 1;
  Matrix o = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    o(i, i + 1) = offdiag[i];
    o(i + 1, i) = offdiag[i];
  }
  return o;
}

void check_common(int n_particles, int cutoff, double coupling_j) {
  if (cutoff < 2) throw std::invalid_argument("cutoff must be >= 2, got " + std::to_string(cutoff));
  if (n_particles < 2) {
    throw std::invalid_argument("n_particles must be >= 2, got " + std::to_string(n_particles));
  }
  if (!(coupling_j > 0.0)) throw std::invalid_argument("coupling_j must be > 0");
}

// Deterministic phase fix: rotate/flip so the n = 0 amplitude is real and
// non-negative; falls back to the first non-negligible component when the
// n = 0 amplitude vanishes.
void fix_phase(Vector& v) {
  Eigen::Index ref = 0;
  if (std::abs(v[0]) < 1e-300) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-12) { ref = i; break; }
    }
  }
  if (v[ref] < 0.0) v = -v;
}

}  // namespace

ThinSpectrumModel build_ladder_model(int n_particles, int cutoff, double coupling_j) {
  check_common(n_particles, cutoff, coupling_j);
  ThinSpectrumModel m;
  m.n_particles = n_particles;
  m.cutoff = cutoff;
  m.coupling_j = coupling_j;
  m.energies = tower_energies(n_particles, cutoff, coupling_j);
  m.order_param = tridiagonal_from_offdiag(Vector::Constant(cutoff - 1, n_particles / 4.0));
  m.kind = ModelKind::Ladder;
  return m;
}

ThinSpectrumModel build_lieb_mattis_model(int n_particles, int cutoff, double coupling_j) {
  check_common(n_particles, cutoff, coupling_j);
  if (n_particles % 4 != 0) {
    throw std::invalid_argument("n_particles must be divisible by 4, got " +
                                std::to_string(n_particles));
  }
  const int sector = n_particles / 2 + 1;
  if (cutoff > sector) {
    throw std::invalid_argument("cutoff " + std::to_string(cutoff) +
                                " exceeds sector size N/2+1 = " + std::to_string(sector));
  }
  const double s = n_particles / 4.0;
  Vector offdiag(cutoff - 1);
  for (int n = 0; n + 1 < cutoff; ++n) offdiag[n] = staggered_order_element(s, n);

  ThinSpectrumModel m;
  m.n_particles = n_particles;
  m.cutoff = cutoff;
  m.coupling_j = coupling_j;
  m.energies = tower_energies(n_particles, cutoff, coupling_j);
  m.order_param = tridiagonal_from_offdiag(offdiag);
  m.kind = ModelKind::LiebMattis;
  return m;
}

QuantumState symmetric_ground_state(const ThinSpectrumModel& model) {
  return QuantumState::basis_state(model.cutoff, 0);
}

EquilibriumResult ground_state_with_field(const ThinSpectrumModel& model, double field_c) {
  if (field_c == 0.0) {
    // exact: the unperturbed tower is diagonal with a unique minimum at n = 0
    return {symmetric_ground_state(model), model.energies[0], 0.0, false};
  }
  Matrix h = model.order_param * field_c;
  h.diagonal() += model.energies;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("ground_state_with_field: eigensolver failed");
  }

  // Among eigenvalues degenerate with the minimum, pick the eigenvector with
  // the largest n = 0 amplitude (deterministic tie-break).
  const Vector& evals = solver.eigenvalues();
  const double e0 = evals[0];
  const double tol = 1e-12 * std::max(1.0, std::abs(e0));
  Eigen::Index pick = 0;
  for (Eigen::Index i = 1; i < evals.size() && evals[i] - e0 <= tol; ++i) {
    if (std::abs(solver.eigenvectors()(0, i)) > std::abs(solver.eigenvectors()(0, pick))) pick = i;
  }
  Vector g = solver.eigenvectors().col(pick);
  fix_phase(g);

  const int top_start = model.cutoff - std::max(1, (model.cutoff + 9) / 10);
  double top_weight = 0.0;
  for (Eigen::Index i = top_start; i < g.size(); ++i) top_weight += g[i] * g[i];

  EquilibriumResult r{QuantumState(g.cast<Complex>(), true), evals[pick],
                      g.dot(model.order_param * g), top_weight > 1e-6};
  return r;
}

EquilibriumResult broken_ground_state(const ThinSpectrumModel& model, double field_b) {
  if (field_b < 0.0) throw std::invalid_argument("field_b must be >= 0");
  return ground_state_with_field(model, field_b);
}

double order_parameter_expectation(const ThinSpectrumModel& model, const QuantumState& state) {
  if (state.dim() != model.cutoff) {
    throw std::invalid_argument("order_parameter_expectation: dimension mismatch");
  }
  const ComplexVector& a = state.amplitudes();
  const Complex v = a.dot(model.order_param.cast<Complex>() * a);
  const double scale = std::max(1.0, std::abs(v.real()));
  if (std::abs(v.imag()) > 1e-12 * scale) {
    throw NumericalError("order_parameter_expectation: imaginary residue too large");
  }
  return v.real();
}

}  // namespace thinspec
