#pragma once

#include <array>
#include <optional>
#include <vector>

#include "prethermo/complex_matrix.hpp"
#include "prethermo/probes.hpp"

namespace prethermo {

/// Reduced V-model coordinates: averaged excited population and the real and
/// imaginary parts of the excited-excited coherence.
struct ReducedState {
  double p = 0.0;
  double sigmaR = 0.0;
  double sigmaI = 0.0;
};

/// Affine system dv/dt = L v + drive on (p, sigmaR, sigmaI).
struct AffineGenerator {
  std::array<std::array<double, 3>, 3> matrix{};
  std::array<double, 3> drive{};

  /// Homogeneous 4x4 lift [[L, drive], [0, 0]] acting on (v, 1), so spectral
  /// propagation applies unchanged to the affine system.
  ComplexMatrix homogeneous() const;
};

AffineGenerator unified_generator_v(const Rates& rates, double delta);

/// Closed-form solution of the reduced V-model dynamics (lowest order in the
/// splitting). sigmaI is not produced.
ReducedState closed_form_evolution(const Rates& rates, double delta,
                                   const ReducedState& init, double t);

/// Perturbative Liouvillian eigenvalues: lambda1 = -phi d^2 / (k (k + phi)),
/// lambda2 = -k, lambda3 = -(phi + k), with tau_n = 1 / |lambda_n|.
struct LepeResult {
  double lambda1, lambda2, lambda3;
  double tau1, tau2, tau3;
};
LepeResult lepe_eigenvalues(const Rates& rates, double delta);

/// Quasistationary state reached after the fast modes decay; fixed entirely
/// by xi = sigma0R - p0, which must lie in [-1, 0].
struct PrethermalState {
  double p_tilde = 0.0;
  double sigma_tilde = 0.0;
  double xi = 0.0;
  double beta = 0.0;
  double nu = 0.0;

  ComplexMatrix matrix() const;        // 3x3 density matrix
  ComplexMatrix matrix_dbeta() const;  // analytic beta derivative
  double dp_dbeta() const;             // = dsigma_dbeta
};
PrethermalState prethermal_state(double beta, double nu, double xi);

enum class RedfieldVariant { unified, full_secular, nonsecular };

struct Generator {
  enum class Basis { reduced_v_model, vectorized };
  ComplexMatrix matrix;  // homogeneous 4x4, or dim^2 x dim^2 superoperator
  Basis basis = Basis::vectorized;
  std::size_t state_dim = 0;
};

Generator reduced_generator(const Rates& rates, double delta);

/// Superoperator on vectorized density matrices. Golden-rule rates
/// Gamma(w) = J(w)(n_B(w)+1) for w > 0, J(|w|) n_B(|w|) for w < 0 and
/// gamma/beta at w = 0; Lamb shifts dropped. `unified` clusters Bohr
/// frequencies within cluster_tol and secularizes across clusters,
/// `full_secular` keeps one dissipator per transition matrix element,
/// `nonsecular` keeps all Redfield terms.
Generator build_redfield_generator(const ProbeModel& model, RedfieldVariant variant,
                                   double cluster_tol);

struct EvolveResult {
  std::vector<ComplexMatrix> states;
  std::vector<double> trace_errors;
  std::vector<double> min_eigenvalues;
  bool used_fallback = false;
};

EvolveResult evolve(const Generator& gen, const ComplexMatrix& rho0,
                    const std::vector<double>& times);

/// Reduced coordinates from a 3x3 V-model state.
ReducedState reduce(const ComplexMatrix& rho);

struct TimescaleReport {
  cvector eigenvalues;  // active modes, sorted by ascending |Re|
  double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;
  // Largest ratio between consecutive sorted decay rates; the prethermal
  // window spans (tau_window_fast, tau_window_slow) across that gap and
  // t_plateau is its geometric midpoint. For the V model this reduces to
  // separation_ratio = tau1/tau2 and t_plateau = sqrt(tau1 tau2).
  double separation_ratio = 0.0;
  double tau_window_slow = 0.0, tau_window_fast = 0.0;
  double t_plateau = 0.0;
  bool window_nonempty = false;
  bool nonrelaxing = false;  // extra (near-)zero mode beyond the stationary one
};

TimescaleReport analyze_timescales(const Generator& gen,
                                   const ComplexMatrix* rho0 = nullptr,
                                   double gap_threshold = 100.0);

}  // namespace prethermo
