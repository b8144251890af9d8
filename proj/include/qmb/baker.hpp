#pragma once

#include <cmath>
#include <numbers>

#include "qmb/types.hpp"

namespace qmb {

/// Discrete Fourier kernel G(k,l) = dim^{-1/2} exp(-i 2 pi (k+phi_p)(l+phi_q)/dim)
/// connecting the position and momentum representations on the torus.
/// Unitary for every dim >= 1 and every phase pair.
inline Matrix fourier_kernel(int dim, const QuantizationPhases& phases) {
  if (dim < 1) throw std::invalid_argument("fourier_kernel: dim must be positive");
  Matrix g(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      const double theta =
          -2.0 * std::numbers::pi * (k + phases.phi_p()) * (l + phases.phi_q()) / dim;
      g(k, l) = std::polar(norm, theta);
    }
  }
  return g;
}

/// Quantum baker map U = G_N^{-1} (G_{N/2} \oplus G_{N/2}) for even N.
/// Both half-size kernels use the same phase pair as the full one.
/// G_N^{-1} is taken as the adjoint (G_N is unitary).
inline LocalUnitary quantum_baker(int dim, const QuantizationPhases& phases) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("quantum_baker: dim must be even and >= 2");
  const int half = dim / 2;
  const Matrix g = fourier_kernel(dim, phases);
  const Matrix gh = fourier_kernel(half, phases);
  Matrix mixed = Matrix::Zero(dim, dim);
  mixed.topLeftCorner(half, half) = gh;
  mixed.bottomRightCorner(half, half) = gh;
  return make_local_unitary(g.adjoint() * mixed, "baker");
}

/// Right-left exchange: permutation l -> (l + dim/2) mod dim.
inline LocalUnitary exchange_unitary(int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("exchange_unitary: dim must be even and >= 2");
  Matrix m = Matrix::Zero(dim, dim);
  for (int l = 0; l < dim; ++l) m((l + dim / 2) % dim, l) = 1.0;
  return make_local_unitary(std::move(m), "exchange");
}

inline LocalUnitary identity_unitary(int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("identity_unitary: dim must be even and >= 2");
  return make_local_unitary(Matrix::Identity(dim, dim), "identity");
}

}  // namespace qmb
