#pragma once

#include <cstddef>
#include <vector>

#include "prethermo/complex_matrix.hpp"

namespace prethermo {

/// Ohmic bath coupling J(w) = gamma * w.
struct SpectralDensity {
  double gamma = 0.07;
  double operator()(double w) const { return gamma * w; }
};

/// Thermal rate constants of the unified QME for the V model.
/// k = 2 J(nu) (n_B + 1), phi = k (1 + 2 exp(-beta nu)).
struct Rates {
  double k = 0.0;
  double phi = 0.0;
  double nbar = 0.0;
};

/// A thermometry setup: diagonal probe Hamiltonian (ground level pinned at 0),
/// Hermitian coupling operator, Ohmic bath and sample temperature.
/// Energies are expressed in units of nu (the manifold gap).
struct ProbeModel {
  std::vector<double> level_energies;  // size N+1, first entry 0
  std::size_t excited_count = 0;       // N
  ComplexMatrix coupling;              // S = sum_i |1><i+1| + h.c.
  SpectralDensity bath;
  double beta = 4.0;

  std::size_t dim() const { return level_energies.size(); }
  double nu() const;           // top excited energy
  ComplexMatrix hamiltonian() const;

  /// Three-level V probe: energies (0, nu - delta, nu), requires delta/nu < 1e-2.
  static ProbeModel v_model(double nu, double delta, double gamma, double beta);
  /// Two-level probe, splitting nu.
  static ProbeModel qubit(double nu, double gamma, double beta);
  /// One ground level plus N excited levels. `spread` > 0 staggers the
  /// manifold as nu - (N-j) * spread (top level at nu); spread = 0 gives the
  /// exactly degenerate model.
  static ProbeModel n_level(std::size_t n, double nu, double gamma, double beta,
                            double spread = 0.0);
};

/// Bose-Einstein occupation 1 / (exp(beta nu) - 1). Rejects nu <= 0; the
/// Ohmic zero-frequency limit is handled inside rate construction only.
double bose_einstein(double nu, double beta);

Rates thermal_rates(const ProbeModel& model);

/// exp(-beta H) / Z, diagonal in the energy basis.
ComplexMatrix gibbs_state(const ProbeModel& model);

/// Analytic beta-derivative of the Gibbs family: (<H> - H) rho.
ComplexMatrix gibbs_state_dbeta(const ProbeModel& model);

enum class InitialKind { ground, maximally_mixed, ambient_thermal, custom };

struct InitialSpec {
  InitialKind kind = InitialKind::ground;
  double beta_ambient = 2.5;                       // ambient_thermal
  double p2 = 0, p3 = 0, a = 0, b = 0, sigma0R = 0;  // custom (V model)
};

struct InitialState {
  ComplexMatrix rho;
  double p0 = 0.0;       // averaged excited population
  double sigma0R = 0.0;  // averaged real excited-excited coherence
  double sigma0I = 0.0;
  double xi = 0.0;       // sigma0R - p0
};

/// Builds the (N+1)x(N+1) initial density matrix and its reduced coordinates.
/// Unphysical custom states are rejected naming the violated constraint.
InitialState initial_state(const ProbeModel& model, const InitialSpec& spec);

/// Smallest eigenvalue of a Hermitian state (physicality diagnostic).
double min_eigenvalue(const ComplexMatrix& rho);

}  // namespace prethermo
