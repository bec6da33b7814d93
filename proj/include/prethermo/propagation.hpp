#pragma once

#include <vector>

#include "prethermo/complex_matrix.hpp"
#include "prethermo/eig.hpp"

namespace prethermo {

struct PropagationResult {
  std::vector<cvector> states;   // one per requested time
  bool used_expm_fallback = false;
};

/// v(t) = V exp(Lambda t) V^-1 v0. Exact for linear time-invariant generators,
/// O(1) per time point regardless of t. Falls back to scaling-and-squaring
/// matrix exponentials when the generator is defective or its eigenvector
/// matrix is ill-conditioned (reported in the result).
PropagationResult propagate_spectral(const ComplexMatrix& g, const cvector& v0,
                                     const std::vector<double>& times);

/// Same, reusing a precomputed eigensystem of g.
PropagationResult propagate_spectral(const ComplexMatrix& g, const EigenSystem& es,
                                     const cvector& v0, const std::vector<double>& times);

/// Scaling-and-squaring Pade(6,6) matrix exponential.
ComplexMatrix expm(const ComplexMatrix& a);

/// Fixed-step classical RK4 for dv/dt = G v, independent cross-check for the
/// spectral propagator on short windows.
cvector rk4_integrate(const ComplexMatrix& g, cvector v, double t_final, double h);

std::vector<double> log_spaced(double start, double stop, std::size_t points);

}  // namespace prethermo
