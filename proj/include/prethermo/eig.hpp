#pragma once

#include "prethermo/complex_matrix.hpp"

namespace prethermo {

/// Eigendecomposition A V = V diag(eigenvalues). `inverse_vectors` holds V^-1
/// (equal to V^dag for Hermitian input). `residual_norm` is max|A V - V L|.
struct EigenSystem {
  cvector eigenvalues;
  ComplexMatrix right_vectors;
  ComplexMatrix inverse_vectors;
  double residual_norm = 0.0;
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
};

/// Cyclic complex Jacobi. Eigenvalues real, ascending; eigenvectors
/// orthonormal. Rejects inputs whose Hermiticity defect exceeds
/// 1e-12 * max|A| with the defect in the message.
EigenSystem hermitian_eig(const ComplexMatrix& a);

/// Hessenberg reduction + explicitly shifted QR (Wilkinson shift, hard cap of
/// 30 n sweeps). Eigenvalues unordered complex. Sets `ill_conditioned` when
/// the eigenvector matrix condition estimate exceeds 1e12.
/// Throws NumericsError on convergence failure; callers fall back to
/// stepwise/matrix-exponential propagation.
EigenSystem general_eig(const ComplexMatrix& a);

}  // namespace prethermo
