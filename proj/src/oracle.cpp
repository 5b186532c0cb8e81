#include "thinspec/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "thinspec/coupling.hpp"
#include "thinspec/dynamics.hpp"
#include "thinspec/errors.hpp"

namespace thinspec {

namespace {

double site_sz(int state, int site) { return ((state >> site) & 1) ? 0.5 : -0.5; }

double sublattice_sz(int state, int n_spins, int parity) {
  double s = 0.0;
  for (int i = parity; i < n_spins; i += 2) s += site_sz(state, i);
  return s;
}

// Normalized symmetric (maximal-spin) states of `nsub` spins-1/2, one per
// magnetization; dicke[k] has k up spins, m = k - nsub/2.
std::vector<Vector> dicke_states(int nsub) {
  const int dim = 1 << nsub;
  std::vector<Vector> out(nsub + 1, Vector::Zero(dim));
  for (int state = 0; state < dim; ++state) {
    out[__builtin_popcount(static_cast<unsigned>(state))][state] = 1.0;
  }
  for (auto& v : out) v /= v.norm();
  return out;
}

void check_size(int n_spins) {
  if (n_spins < 2 || n_spins % 2 != 0) {
    throw std::invalid_argument("n_spins must be even and >= 2");
  }
  if (n_spins > 12) {
    throw std::invalid_argument("size limit: n_spins > 12 exceeds the dense desk-scale cap");
  }
}

}  // namespace

FullSpinSystem build_full_system(int n_spins, double coupling_j, double field_b) {
  check_size(n_spins);
  if (!(coupling_j > 0.0)) throw std::invalid_argument("coupling_j must be > 0");

  const int dim = 1 << n_spins;
  FullSpinSystem sys;
  sys.n_spins = n_spins;
  sys.coupling_j = coupling_j;
  sys.field_b = field_b;
  sys.hamiltonian = Matrix::Zero(dim, dim);
  sys.staggered_diag.resize(dim);

  const double scale = 2.0 * coupling_j / n_spins;
  for (int state = 0; state < dim; ++state) {
    sys.staggered_diag[state] =
        sublattice_sz(state, n_spins, 0) - sublattice_sz(state, n_spins, 1);
    double diag = 0.0;
    for (int i = 0; i < n_spins; i += 2) {
      for (int j = 1; j < n_spins; j += 2) {
        diag += site_sz(state, i) * site_sz(state, j);
        if (((state >> i) & 1) != ((state >> j) & 1)) {
          const int flipped = state ^ (1 << i) ^ (1 << j);
          sys.hamiltonian(flipped, state) += 0.5 * scale;
        }
      }
    }
    sys.hamiltonian(state, state) += scale * diag + field_b * sys.staggered_diag[state];
  }
  return sys;
}

Matrix sector_basis(int n_spins) {
  check_size(n_spins);
  const int nsub = n_spins / 2;
  const double s = nsub / 2.0;
  const int n_states = nsub + 1;  // S = 0..2s
  const int dim = 1 << n_spins;
  const std::vector<Vector> dicke = dicke_states(nsub);

  Matrix basis = Matrix::Zero(n_states, dim);
  for (int total_s = 0; total_s < n_states; ++total_s) {
    for (int ka = 0; ka <= nsub; ++ka) {
      const double ma = ka - s;
      const int kb = nsub - ka;  // m_b = -ma
      const double c = clebsch_gordan(s, ma, s, -ma, total_s, 0.0);
      if (std::abs(c) < 1e-15) continue;
      const Vector& va = dicke[ka];
      const Vector& vb = dicke[kb];
      for (int ia = 0; ia < (1 << nsub); ++ia) {
        if (va[ia] == 0.0) continue;
        for (int ib = 0; ib < (1 << nsub); ++ib) {
          if (vb[ib] == 0.0) continue;
          // interleave: sublattice A on even sites, B on odd sites
          int state = 0;
          for (int k = 0; k < nsub; ++k) {
            if ((ia >> k) & 1) state |= 1 << (2 * k);
            if ((ib >> k) & 1) state |= 1 << (2 * k + 1);
          }
          basis(total_s, state) += c * va[ia] * vb[ib];
        }
      }
    }
    basis.row(total_s) /= basis.row(total_s).norm();
  }
  return basis;
}

ThinSpectrumModel thin_sector_projection(const FullSpinSystem& system, int cutoff) {
  if (system.field_b != 0.0) {
    throw std::invalid_argument("thin_sector_projection requires a b = 0 system");
  }
  if (system.n_spins % 4 != 0) {
    throw std::invalid_argument("thin_sector_projection requires n_spins divisible by 4");
  }
  const int sector = system.n_spins / 2 + 1;
  if (cutoff < 2 || cutoff > sector) {
    throw std::invalid_argument("cutoff must lie in [2, sector size " + std::to_string(sector) + "]");
  }

  const Matrix basis = sector_basis(system.n_spins).topRows(cutoff);
  const Matrix h_proj = basis * system.hamiltonian * basis.transpose();
  const Matrix o_proj = basis * system.staggered_diag.asDiagonal() * basis.transpose();

  // The sector is exactly closed under H0; anything beyond numerical noise in
  // the off-diagonal means the basis construction is broken.
  Matrix h_off = h_proj;
  h_off.diagonal().setZero();
  if (h_off.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, h_proj.cwiseAbs().maxCoeff())) {
    throw NumericalError("thin_sector_projection: H0 projection is not diagonal");
  }

  ThinSpectrumModel model;
  model.n_particles = system.n_spins;
  model.cutoff = cutoff;
  model.coupling_j = system.coupling_j;
  model.energies = h_proj.diagonal().array() - h_proj(0, 0);
  model.order_param = 0.5 * (o_proj + o_proj.transpose());
  model.kind = ModelKind::LiebMattis;
  return model;
}

ComplexVector embed_thin_state(const FullSpinSystem& system, const QuantumState& thin_state) {
  const Matrix basis = sector_basis(system.n_spins);
  if (thin_state.dim() > basis.rows()) {
    throw std::invalid_argument("embed_thin_state: state larger than the sector");
  }
  const ComplexVector& a = thin_state.amplitudes();
  ComplexVector full = ComplexVector::Zero(basis.cols());
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    full += a[n] * basis.row(n).transpose().cast<Complex>();
  }
  return full;
}

double full_evolution_check(const FullSpinSystem& system, const ThinSpectrumModel& thin_model,
                            double o, const std::vector<double>& t_grid,
                            const QuantumState& thin_initial) {
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw std::invalid_argument("t_grid must start at 0");
  }
  if (thin_initial.dim() != thin_model.cutoff) {
    throw std::invalid_argument("initial state does not match the thin model");
  }

  const Matrix basis = sector_basis(system.n_spins);
  ComplexVector psi_full = embed_thin_state(system, thin_initial);
  {
    // in-sector sanity (guards against a broken basis)
    const ComplexVector coeffs = basis.cast<Complex>() * psi_full;
    const double out_weight = std::abs(psi_full.squaredNorm() - coeffs.squaredNorm());
    if (out_weight > 1e-10) {
      throw std::invalid_argument("initial state has weight outside the thin sector");
    }
  }

  // Thin trajectory via the dense reference backend.
  PropagatorConfig config;
  config.field_strength_o = o;
  config.time_step = t_grid.size() > 1 ? std::max(t_grid[1] - t_grid[0], 1e-6) : 1.0;
  const TrajectoryRecord thin_rec = evolve_trajectory(thin_initial, thin_model, config, t_grid);

  // Full trajectory: Taylor-stepped action of exp(-i dt K_full) with
  // per-step renormalization; the global shift by E0 only changes an overall
  // phase of the renormalized state.
  const double e0 = basis.row(0) * (system.hamiltonian * basis.row(0).transpose());
  const int dim = 1 << system.n_spins;

  // Up to 10 spins the dense eigendecomposition of K_full is cheap and lets
  // the long default horizons be evaluated directly; beyond that, step with
  // a truncated-Taylor action (short horizons only at that size).
  std::optional<SpectralPropagator> spectral;
  if (dim <= 1024) {
    ComplexMatrix k = system.hamiltonian.cast<Complex>();
    k.diagonal().array() += -e0 + Complex(0.0, -o) * system.staggered_diag.array();
    spectral.emplace(k);
  }
  const double knorm =
      system.hamiltonian.cwiseAbs().rowwise().sum().maxCoeff() + std::abs(e0) +
      o * system.staggered_diag.cwiseAbs().maxCoeff();
  // K_full v = (H - e0) v - i o staggered .* v
  auto apply_k = [&](const ComplexVector& v) -> ComplexVector {
    ComplexVector out = system.hamiltonian * v;
    out -= e0 * v;
    out.array() += Complex(0.0, -o) * system.staggered_diag.array().cast<Complex>() * v.array();
    return out;
  };

  double max_dev = 0.0;
  for (std::size_t idx = 0; idx < t_grid.size(); ++idx) {
    if (idx > 0) {
      const double dt = t_grid[idx] - t_grid[idx - 1];
      if (!(dt > 0.0)) throw std::invalid_argument("t_grid must be strictly increasing");
      if (spectral) {
        psi_full = spectral->evaluate(psi_full, dt).first;
      } else {
        const int nsub = std::max(1, static_cast<int>(std::ceil(dt * knorm)));
        const double h = dt / nsub;
        for (int stepi = 0; stepi < nsub; ++stepi) {
          ComplexVector acc = psi_full;
          ComplexVector term = psi_full;
          const Complex factor(0.0, -h);
          for (int order = 1; order <= 200; ++order) {
            term = (factor / static_cast<double>(order)) * apply_k(term);
            acc += term;
            if (term.norm() <= 1e-13 * acc.norm()) break;
            if (order == 200) throw NumericalError("full evolution Taylor series did not converge");
          }
          psi_full = acc / acc.norm();
        }
      }
    }
    const double o_full =
        std::real(psi_full.dot(system.staggered_diag.cast<Complex>().asDiagonal() * psi_full));
    max_dev = std::max(max_dev, std::abs(o_full - thin_rec.order_param[idx]));
  }
  return max_dev;
}

std::pair<double, Vector> full_ground_state(const FullSpinSystem& system) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(system.hamiltonian);
  if (solver.info() != Eigen::Success) throw NumericalError("full_ground_state: eigensolver failed");
  Vector g = solver.eigenvectors().col(0);
  Eigen::Index imax;
  g.cwiseAbs().maxCoeff(&imax);
  if (g[imax] < 0) g = -g;
  return {solver.eigenvalues()[0], g};
}

Matrix total_spin_squared(int n_spins) {
  check_size(n_spins);
  const int dim = 1 << n_spins;
  Matrix s2 = Matrix::Zero(dim, dim);
  for (int state = 0; state < dim; ++state) {
    double diag = 0.75 * n_spins;
    for (int i = 0; i < n_spins; ++i) {
      for (int j = i + 1; j < n_spins; ++j) {
        diag += 2.0 * site_sz(state, i) * site_sz(state, j);
        if (((state >> i) & 1) != ((state >> j) & 1)) {
          s2(state ^ (1 << i) ^ (1 << j), state) += 1.0;
        }
      }
    }
    s2(state, state) += diag;
  }
  return s2;
}

double sz_conservation_violation(const FullSpinSystem& system) {
  const int dim = 1 << system.n_spins;
  double worst = 0.0;
  for (int col = 0; col < dim; ++col) {
    const double sz_col = sublattice_sz(col, system.n_spins, 0) + sublattice_sz(col, system.n_spins, 1);
    for (int row = 0; row < dim; ++row) {
      if (system.hamiltonian(row, col) == 0.0) continue;
      const double sz_row =
          sublattice_sz(row, system.n_spins, 0) + sublattice_sz(row, system.n_spins, 1);
      worst = std::max(worst, std::abs(sz_row - sz_col) * std::abs(system.hamiltonian(row, col)));
    }
  }
  return worst;
}

}  // namespace thinspec
