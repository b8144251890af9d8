#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace qmb {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Max-norm tolerance for unitarity of matrices built by this library.
inline constexpr double kUnitarityTol = 1e-12;
/// Looser bar applied to matrices loaded from text files.
inline constexpr double kFileUnitarityTol = 1e-10;
/// Max-norm bound on the eigendecomposition reconstruction residual.
inline constexpr double kSpectralTol = 1e-10;
/// Two eigenphases closer than this (wrapped difference) count as degenerate.
inline constexpr double kDegeneracyTol = 1e-10;

/// Raised when a numerical routine violates its residual contract.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Raised by plateau_value when a degenerate eigenphase pair carries weight,
/// so the oscillation time-average diverges.
class UndefinedPlateau : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pair (phi_q, phi_p) in [0,1)^2 fixing the quasi-periodic boundary
/// conditions of the finite Hilbert space.
class QuantizationPhases {
 public:
  QuantizationPhases(double phi_q, double phi_p) : phi_q_(phi_q), phi_p_(phi_p) {
    if (!(phi_q >= 0.0 && phi_q < 1.0))
      throw std::invalid_argument("QuantizationPhases: phi_q must lie in [0,1)");
    if (!(phi_p >= 0.0 && phi_p < 1.0))
      throw std::invalid_argument("QuantizationPhases: phi_p must lie in [0,1)");
  }

  double phi_q() const { return phi_q_; }
  double phi_p() const { return phi_p_; }

  static QuantizationPhases balazs_voros() { return {0.0, 0.0}; }
  static QuantizationPhases saraceno() { return {0.5, 0.5}; }

 private:
  double phi_q_;
  double phi_p_;
};

/// ||M^dagger M - I||_max
inline double unitarity_residual(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

/// An N x N unitary acting on one lattice cell, in the position
/// representation. `label` records provenance (baker, exchange, identity,
/// cue-sample, coe-sample, custom).
struct LocalUnitary {
  int dim = 0;
  Matrix matrix;
  std::string label;
  double residual = 0.0;  // unitarity residual measured at construction
};

/// Validates shape, even dimension and unitarity, then wraps the matrix.
inline LocalUnitary make_local_unitary(Matrix m, std::string label,
                                       double tol = kUnitarityTol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("local unitary: matrix must be square");
  const int n = static_cast<int>(m.rows());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("local unitary: dimension must be even and >= 2");
  const double res = unitarity_residual(m);
  if (!(res <= tol))
    throw std::invalid_argument("local unitary '" + label + "': not unitary (residual " +
                                std::to_string(res) + " > tol)");
  return LocalUnitary{n, std::move(m), std::move(label), res};
}

/// One-step cell-displacement observable restricted to a single cell:
/// +1 on the first half of the position basis, -1 on the second half.
class VelocityBlock {
 public:
  explicit VelocityBlock(int dim) : dim_(dim) {
    if (dim < 2 || dim % 2 != 0)
      throw std::invalid_argument("velocity_block: dimension must be even and >= 2");
  }

  int dim() const { return dim_; }
  int sign(int index) const { return index < dim_ / 2 ? +1 : -1; }

  // Traces evaluated in integer arithmetic on the signs.
  long trace() const {
    long s = 0;
    for (int i = 0; i < dim_; ++i) s += sign(i);
    return s;
  }
  long trace_square() const {
    long s = 0;
    for (int i = 0; i < dim_; ++i) s += sign(i) * sign(i);
    return s;
  }

  RealVector diagonal() const {
    RealVector d(dim_);
    for (int i = 0; i < dim_; ++i) d(i) = sign(i);
    return d;
  }

  Matrix dense() const {
    Matrix m = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) m(i, i) = sign(i);
    return m;
  }

 private:
  int dim_;
};

inline VelocityBlock velocity_block(int dim) { return VelocityBlock(dim); }

}  // namespace qmb
