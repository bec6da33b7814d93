#include "prethermo/probes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "prethermo/eig.hpp"
#include "prethermo/errors.hpp"

namespace prethermo {

namespace {

ComplexMatrix collective_coupling(std::size_t dim) {
  ComplexMatrix s(dim, dim);
  for (std::size_t j = 1; j < dim; ++j) {
    s(0, j) = 1.0;
    s(j, 0) = 1.0;
  }
  return s;
}

ProbeModel make_model(std::vector<double> energies, double gamma, double beta) {
  if (beta <= 0.0) throw DomainError("ProbeModel: beta must be positive");
  if (gamma <= 0.0) throw DomainError("ProbeModel: gamma must be positive");
  ProbeModel m;
  m.excited_count = energies.size() - 1;
  m.coupling = collective_coupling(energies.size());
  m.level_energies = std::move(energies);
  m.bath = SpectralDensity{gamma};
  m.beta = beta;
  return m;
}

}  // namespace

double ProbeModel::nu() const { return level_energies.back(); }

ComplexMatrix ProbeModel::hamiltonian() const {
  return ComplexMatrix::diagonal(level_energies);
}

ProbeModel ProbeModel::v_model(double nu, double delta, double gamma, double beta) {
  if (nu <= 0.0) throw DomainError("v_model: nu must be positive");
  if (delta < 0.0 || delta / nu >= 1e-2)
    throw DomainError(fmt::format(
        "v_model: splitting must satisfy 0 <= delta/nu < 1e-2 (got {})", delta / nu));
  return make_model({0.0, nu - delta, nu}, gamma, beta);
}

ProbeModel ProbeModel::qubit(double nu, double gamma, double beta) {
  if (nu <= 0.0) throw DomainError("qubit: nu must be positive");
  return make_model({0.0, nu}, gamma, beta);
}

ProbeModel ProbeModel::n_level(std::size_t n, double nu, double gamma, double beta,
                               double spread) {
  if (n < 1) throw DomainError("n_level: need at least one excited level");
  if (nu <= 0.0) throw DomainError("n_level: nu must be positive");
  if (spread < 0.0 || (spread > 0.0 && spread * (n - 1) / nu >= 1e-2))
    throw DomainError("n_level: manifold spread too large for quasidegeneracy");
  std::vector<double> e(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j)
    e[j] = nu - static_cast<double>(n - j) * spread;
  return make_model(std::move(e), gamma, beta);
}

double bose_einstein(double nu, double beta) {
  if (nu <= 0.0) throw DomainError("bose_einstein: nu must be positive");
  if (beta <= 0.0) throw DomainError("bose_einstein: beta must be positive");
  return 1.0 / std::expm1(beta * nu);
}

Rates thermal_rates(const ProbeModel& model) {
  double nu = model.nu();
  Rates r;
  r.nbar = bose_einstein(nu, model.beta);
  r.k = 2.0 * model.bath(nu) * (r.nbar + 1.0);
  r.phi = r.k * (1.0 + 2.0 * std::exp(-model.beta * nu));
  return r;
}

ComplexMatrix gibbs_state(const ProbeModel& model) {
  std::size_t d = model.dim();
  std::vector<double> w(d);
  double z = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    w[i] = std::exp(-model.beta * model.level_energies[i]);
    z += w[i];
  }
  ComplexMatrix rho(d, d);
  for (std::size_t i = 0; i < d; ++i) rho(i, i) = w[i] / z;
  return rho;
}

ComplexMatrix gibbs_state_dbeta(const ProbeModel& model) {
  ComplexMatrix rho = gibbs_state(model);
  std::size_t d = model.dim();
  double mean_e = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    mean_e += rho(i, i).real() * model.level_energies[i];
  ComplexMatrix drho(d, d);
  for (std::size_t i = 0; i < d; ++i)
    drho(i, i) = (mean_e - model.level_energies[i]) * rho(i, i).real();
  return drho;
}

double min_eigenvalue(const ComplexMatrix& rho) {
  return hermitian_eig(rho).eigenvalues.front().real();
}

InitialState initial_state(const ProbeModel& model, const InitialSpec& spec) {
  std::size_t d = model.dim();
  std::size_t n = model.excited_count;
  InitialState st;

  switch (spec.kind) {
    case InitialKind::ground: {
      st.rho = ComplexMatrix(d, d);
      st.rho(0, 0) = 1.0;
      break;
    }
    case InitialKind::maximally_mixed: {
      st.rho = ComplexMatrix(d, d);
      for (std::size_t i = 0; i < d; ++i) st.rho(i, i) = 1.0 / static_cast<double>(d);
      break;
    }
    case InitialKind::ambient_thermal: {
      if (spec.beta_ambient <= 0.0)
        throw DomainError("initial_state: ambient beta must be positive");
      // Thermal preparation of the idealized degenerate manifold, matching
      // p0 = exp(-beta_A nu) / (1 + N exp(-beta_A nu)).
      double w = std::exp(-spec.beta_ambient * model.nu());
      double z = 1.0 + static_cast<double>(n) * w;
      st.rho = ComplexMatrix(d, d);
      st.rho(0, 0) = 1.0 / z;
      for (std::size_t i = 1; i < d; ++i) st.rho(i, i) = w / z;
      break;
    }
    case InitialKind::custom: {
      if (d != 3)
        throw DomainError("initial_state: custom form is defined for the V model only");
      ComplexMatrix rho(3, 3);
      rho(0, 0) = 1.0 - spec.p2 - spec.p3;
      rho(0, 1) = rho(1, 0) = spec.a;
      rho(0, 2) = rho(2, 0) = spec.b;
      rho(1, 1) = spec.p2;
      rho(2, 2) = spec.p3;
      rho(1, 2) = rho(2, 1) = spec.sigma0R;
      double lo = min_eigenvalue(rho);
      if (lo < -1e-12)
        throw DomainError(fmt::format(
            "initial_state: custom state violates positivity (min eigenvalue {:.3e})", lo));
      st.rho = std::move(rho);
      break;
    }
  }

  double psum = 0.0;
  for (std::size_t i = 1; i < d; ++i) psum += st.rho(i, i).real();
  st.p0 = psum / static_cast<double>(n);
  if (n >= 2) {
    double sr = 0.0, si = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        sr += st.rho(j, i).real();
        si += st.rho(j, i).imag();
        ++pairs;
      }
    st.sigma0R = sr / static_cast<double>(pairs);
    st.sigma0I = si / static_cast<double>(pairs);
  }
  st.xi = st.sigma0R - st.p0;
  return st;
}

}  // namespace prethermo
