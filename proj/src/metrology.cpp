#include "prethermo/metrology.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "prethermo/eig.hpp"
#include "prethermo/errors.hpp"

namespace prethermo {

double cfi_from_populations(const std::vector<double>& p, const std::vector<double>& dp,
                            double support_cutoff) {
  if (p.size() != dp.size())
    throw DomainError("cfi_from_populations: size mismatch");
  double psum = 0.0, dsum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-12)
      throw DomainError(fmt::format(
          "cfi_from_populations: negative population p[{}] = {:.3e}", i, p[i]));
    psum += p[i];
    dsum += dp[i];
  }
  if (std::abs(psum - 1.0) > 1e-10)
    throw DomainError("cfi_from_populations: populations do not sum to 1");
  if (std::abs(dsum) > 1e-10)
    throw DomainError("cfi_from_populations: derivatives do not sum to 0");
  double f = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > support_cutoff) f += dp[i] * dp[i] / p[i];
  return f;
}

Sld sld(const ComplexMatrix& rho, const ComplexMatrix& drho, double support_cutoff) {
  if (!rho.is_hermitian(1e-10)) throw DomainError("sld: state not Hermitian");
  if (!drho.is_hermitian(1e-10)) throw DomainError("sld: derivative not Hermitian");
  if (std::abs(drho.trace()) > 1e-9)
    throw DomainError("sld: derivative not traceless");

  EigenSystem es = hermitian_eig(rho);
  std::size_t n = rho.rows();
  ComplexMatrix d_eig = es.inverse_vectors * drho * es.right_vectors;

  Sld out;
  ComplexMatrix l_eig(n, n);
  double dscale = std::max(drho.max_abs(), 1e-300);
  for (std::size_t j = 0; j < n; ++j) {
    if (es.eigenvalues[j].real() > support_cutoff) ++out.support_dimension;
    for (std::size_t k = 0; k < n; ++k) {
      double den = es.eigenvalues[j].real() + es.eigenvalues[k].real();
      if (den > support_cutoff) {
        l_eig(j, k) = 2.0 * d_eig(j, k) / den;
      } else if (std::abs(d_eig(j, k)) > 1e-10 * dscale) {
        throw DomainError(fmt::format(
            "sld: derivative element ({},{}) = {:.3e} lies outside the state support"
            " (QFI diverges)", j, k, std::abs(d_eig(j, k))));
      }
    }
  }
  out.matrix = es.right_vectors * l_eig * es.inverse_vectors;
  // Symmetrize away rounding in the basis transforms.
  ComplexMatrix adj = out.matrix.adjoint();
  out.matrix += adj;
  out.matrix *= 0.5;
  return out;
}

double qfi_from_state(const ComplexMatrix& rho, const ComplexMatrix& drho,
                      double support_cutoff) {
  Sld l = sld(rho, drho, support_cutoff);
  ComplexMatrix l2 = l.matrix * l.matrix;
  return (rho * l2).trace().real();
}

double qfi_truncated(const ComplexMatrix& rho, const ComplexMatrix& drho,
                     double support_cutoff) {
  if (!rho.is_hermitian(1e-10)) throw DomainError("qfi_truncated: state not Hermitian");
  EigenSystem es = hermitian_eig(rho);
  std::size_t n = rho.rows();
  ComplexMatrix d_eig = es.inverse_vectors * drho * es.right_vectors;
  double f = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double den = es.eigenvalues[j].real() + es.eigenvalues[k].real();
      if (den > support_cutoff) f += 2.0 * std::norm(d_eig(j, k)) / den;
    }
  }
  return f;
}

namespace {
void check_xi(double xi) {
  if (xi < -1.0 - 1e-12 || xi > 1e-12)
    throw DomainError(fmt::format("xi = {} outside the physical range [-1, 0]", xi));
}
}  // namespace

double cfi_prethermal_analytic(double beta, double nu, double xi) {
  check_xi(xi);
  double ebn = std::exp(nu * beta);
  double d = 1.0 + ebn;
  return nu * nu * ebn * (xi + 1.0) / (d * d * (1.0 - xi * ebn));
}

double qfi_prethermal_analytic(double beta, double nu, double xi) {
  check_xi(xi);
  double ebn = std::exp(nu * beta);
  double d = 1.0 + ebn;
  return nu * nu * ebn * (xi + 1.0) / (d * d);
}

double qfi_equilibrium_v(double beta, double nu) {
  if (beta <= 0.0 || nu <= 0.0) throw DomainError("qfi_equilibrium_v: need beta, nu > 0");
  double ebn = std::exp(nu * beta);
  double d = 2.0 + ebn;
  return 2.0 * nu * nu * ebn / (d * d);
}

double qfi_equilibrium_n(double beta, double nu, double n) {
  if (n < 1.0) throw DomainError("qfi_equilibrium_n: need N >= 1");
  double ebn = std::exp(nu * beta);
  double d = n + ebn;
  return nu * nu * n * ebn / (d * d);
}

OptimalDegeneracy optimal_degeneracy(double beta, double nu) {
  if (beta <= 0.0 || nu <= 0.0) throw DomainError("optimal_degeneracy: need beta, nu > 0");
  OptimalDegeneracy o;
  o.n_continuous = std::exp(beta * nu);
  double lo = std::max(1.0, std::floor(o.n_continuous));
  double hi = std::ceil(o.n_continuous);
  o.n_integer = static_cast<long long>(
      qfi_equilibrium_n(beta, nu, hi) > qfi_equilibrium_n(beta, nu, lo) ? hi : lo);
  o.f_optimum = 0.25 * nu * nu;
  return o;
}

double time_weighted(double fisher, double tau) {
  if (tau <= 0.0) throw DomainError("time_weighted: tau must be positive");
  return fisher / tau;
}

PrecisionBound precision_bound(double fisher, double measurements) {
  if (measurements < 1.0) throw DomainError("precision_bound: need M >= 1");
  if (fisher < 0.0) throw DomainError("precision_bound: negative Fisher information");
  PrecisionBound b;
  if (fisher == 0.0) {
    b.delta_beta = std::numeric_limits<double>::infinity();
    b.unbounded = true;
    return b;
  }
  b.delta_beta = 1.0 / std::sqrt(measurements * fisher);
  return b;
}

double improvement_factor(double tau1, double tau2) {
  if (tau1 <= 0.0 || tau2 <= 0.0) throw DomainError("improvement_factor: need taus > 0");
  return std::sqrt(tau1 / tau2);
}

ComplexMatrix dstate_dbeta(const std::function<ComplexMatrix(double)>& builder,
                           double beta, double h) {
  if (h == 0.0) h = 1e-5 * beta;
  if (h <= 0.0) throw DomainError("dstate_dbeta: step must be positive");
  ComplexMatrix hi = builder(beta + h);
  ComplexMatrix lo = builder(beta - h);
  hi -= lo;
  hi *= 1.0 / (2.0 * h);
  ComplexMatrix adj = hi.adjoint();
  hi += adj;
  hi *= 0.5;
  return hi;
}

}  // namespace prethermo
