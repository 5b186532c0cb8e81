#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace thinspec {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Normalized amplitude vector over the thin-spectrum basis <n|psi>.
class QuantumState {
 public:
  // Accepts a vector that is already unit-norm (within 1e-12), or
  // renormalizes when `renormalize` is set.
  explicit QuantumState(ComplexVector amplitudes, bool renormalize = false)
      : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1) throw std::invalid_argument("QuantumState: empty amplitude vector");
    const double n = amp_.norm();
    if (renormalize) {
      if (n == 0.0) throw std::invalid_argument("QuantumState: zero vector cannot be normalized");
      amp_ /= n;
    } else if (std::abs(n - 1.0) > 1e-12) {
      throw std::invalid_argument("QuantumState: amplitudes not unit norm");
    }
  }

  static QuantumState basis_state(Eigen::Index dim, Eigen::Index n) {
    if (n < 0 || n >= dim) throw std::invalid_argument("basis_state: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v[n] = 1.0;
    return QuantumState(std::move(v));
  }

  const ComplexVector& amplitudes() const { return amp_; }
  Eigen::Index dim() const { return amp_.size(); }

  Complex overlap(const QuantumState& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("overlap: dimension mismatch");
    return amp_.dot(other.amp_);  // conjugates *this
  }

  double squared_overlap(const QuantumState& other) const {
    return std::norm(overlap(other));
  }

  // Inverse participation ratio 1 / sum |psi_n|^4; grows with wavepacket width.
  double participation_ratio() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) s += std::norm(amp_[i]) * std::norm(amp_[i]);
    return 1.0 / s;
  }

 private:
  ComplexVector amp_;
};

}  // namespace thinspec
