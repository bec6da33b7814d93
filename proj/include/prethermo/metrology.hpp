#pragma once

#include <functional>
#include <vector>

#include "prethermo/complex_matrix.hpp"

namespace prethermo {

/// Symmetric logarithmic derivative L with d(rho)/d(beta) = (L rho + rho L)/2
/// on the support of rho.
struct Sld {
  ComplexMatrix matrix;
  std::size_t support_dimension = 0;
};

struct FisherReport {
  double beta = 0.0;
  double cfi = 0.0;
  double qfi = 0.0;
  double tau_used = 0.0;
  double tcfi = 0.0;
  double tqfi = 0.0;
  enum class Method { analytic, numeric_sld, numeric_population } method = Method::analytic;
  double derivative_step = 0.0;
};

/// Classical Fisher information sum_j (dp_j)^2 / p_j over populations above
/// the support cutoff.
double cfi_from_populations(const std::vector<double>& p, const std::vector<double>& dp,
                            double support_cutoff = 1e-14);

/// SLD in the eigenbasis of rho: L_jk = 2 (drho)_jk / (d_j + d_k) where
/// d_j + d_k > cutoff, 0 otherwise. Rejects derivatives with weight outside
/// the support of rho (the QFI would diverge).
Sld sld(const ComplexMatrix& rho, const ComplexMatrix& drho, double support_cutoff = 1e-14);

/// Tr[rho L^2]; equals the CFI when rho and drho commute.
double qfi_from_state(const ComplexMatrix& rho, const ComplexMatrix& drho,
                      double support_cutoff = 1e-14);

/// QFI = sum_{jk} 2 |(drho)_jk|^2 / (d_j + d_k), silently dropping terms with
/// d_j + d_k <= cutoff. For finite-difference derivatives, whose weight just
/// outside the support is rounding noise that the strict SLD path rejects.
double qfi_truncated(const ComplexMatrix& rho, const ComplexMatrix& drho,
                     double support_cutoff = 1e-12);

/// Closed-form prethermal Fisher information as a function of xi in [-1, 0].
double cfi_prethermal_analytic(double beta, double nu, double xi);
double qfi_prethermal_analytic(double beta, double nu, double xi);

/// Equilibrium QFI of the V model: 2 nu^2 e^{nu beta} / (2 + e^{nu beta})^2.
double qfi_equilibrium_v(double beta, double nu);

/// Equilibrium QFI of the N-degenerate-level probe:
/// nu^2 N e^{nu beta} / (N + e^{nu beta})^2.
double qfi_equilibrium_n(double beta, double nu, double n);

struct OptimalDegeneracy {
  double n_continuous = 0.0;  // e^{beta nu}
  long long n_integer = 0;    // better of floor/ceil under the QFI formula
  double f_optimum = 0.0;     // nu^2 / 4 at the continuous optimum
};
OptimalDegeneracy optimal_degeneracy(double beta, double nu);

/// Fisher information divided by the state-preparation time (tau2 prethermal,
/// tau1 equilibrium).
double time_weighted(double fisher, double tau);

struct PrecisionBound {
  double delta_beta = 0.0;  // (M F)^{-1/2}; infinity when F = 0
  bool unbounded = false;
};
PrecisionBound precision_bound(double fisher, double measurements);

/// sqrt(tau1 / tau2): precision gain at equal wall-clock budgets.
double improvement_factor(double tau1, double tau2);

/// Central finite difference (rho(beta+h) - rho(beta-h)) / (2h), symmetrized.
/// Default step h = 1e-5 * beta.
ComplexMatrix dstate_dbeta(const std::function<ComplexMatrix(double)>& builder,
                           double beta, double h = 0.0);

}  // namespace prethermo
