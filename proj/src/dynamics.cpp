#include "prethermo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "prethermo/eig.hpp"
#include "prethermo/errors.hpp"
#include "prethermo/propagation.hpp"

namespace prethermo {

ComplexMatrix AffineGenerator::homogeneous() const {
  ComplexMatrix g(4, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) g(i, j) = matrix[i][j];
    g(i, 3) = drive[i];
  }
  return g;
}

AffineGenerator unified_generator_v(const Rates& rates, double delta) {
  if (delta < 0.0) throw DomainError("unified_generator_v: negative splitting");
  double k = rates.k, phi = rates.phi;
  AffineGenerator g;
  g.matrix = {{{-phi, -k, 0.0},
               {-phi, -k, delta},
               {0.0, -delta, -k}}};
  g.drive = {0.5 * (phi - k), 0.5 * (phi - k), 0.0};
  return g;
}

ReducedState closed_form_evolution(const Rates& rates, double delta,
                                   const ReducedState& init, double t) {
  if (t < 0.0) throw DomainError("closed_form_evolution: negative time");
  double k = rates.k, phi = rates.phi;
  double lambda1 = -phi * delta * delta / (k * (k + phi));
  double lambda3 = -(phi + k);
  double a_coef = phi * (1.0 + 2.0 * init.sigmaR - 2.0 * init.p) - k;
  double b_coef = phi * (1.0 - 2.0 * init.p) - k * (1.0 + 2.0 * init.sigmaR);
  double e_slow = std::exp(lambda1 * t);
  double e_fast = std::exp(lambda3 * t);
  double denom = 2.0 * (phi + k);
  ReducedState out;
  out.sigmaR = (a_coef * e_slow - b_coef * e_fast) / denom;
  out.p = (phi - k) / (2.0 * phi) -
          ((k / phi) * a_coef * e_slow + b_coef * e_fast) / denom;
  out.sigmaI = 0.0;
  return out;
}

LepeResult lepe_eigenvalues(const Rates& rates, double delta) {
  double k = rates.k, phi = rates.phi;
  LepeResult r;
  r.lambda1 = -phi * delta * delta / (k * (k + phi));
  r.lambda2 = -k;
  r.lambda3 = -(phi + k);
  auto tau = [](double lam) {
    return lam == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(lam);
  };
  r.tau1 = tau(r.lambda1);
  r.tau2 = tau(r.lambda2);
  r.tau3 = tau(r.lambda3);
  return r;
}

PrethermalState prethermal_state(double beta, double nu, double xi) {
  if (beta <= 0.0 || nu <= 0.0)
    throw DomainError("prethermal_state: beta and nu must be positive");
  if (xi < -1.0 - 1e-12 || xi > 1e-12)
    throw DomainError(fmt::format(
        "prethermal_state: xi = {} violates the physicality bound -1 <= xi <= 0", xi));
  xi = std::clamp(xi, -1.0, 0.0);
  double e = std::exp(-beta * nu);
  PrethermalState s;
  s.xi = xi;
  s.beta = beta;
  s.nu = nu;
  s.p_tilde = (e - xi) / (2.0 * (1.0 + e));
  s.sigma_tilde = (e + (1.0 + 2.0 * e) * xi) / (2.0 * (1.0 + e));
  return s;
}

ComplexMatrix PrethermalState::matrix() const {
  ComplexMatrix rho(3, 3);
  rho(0, 0) = 1.0 - 2.0 * p_tilde;
  rho(1, 1) = rho(2, 2) = p_tilde;
  rho(1, 2) = rho(2, 1) = sigma_tilde;
  return rho;
}

double PrethermalState::dp_dbeta() const {
  double e = std::exp(-beta * nu);
  double d = 1.0 + e;
  return -(xi + 1.0) * nu * e / (2.0 * d * d);
}

ComplexMatrix PrethermalState::matrix_dbeta() const {
  double dp = dp_dbeta();
  ComplexMatrix drho(3, 3);
  drho(0, 0) = -2.0 * dp;
  drho(1, 1) = drho(2, 2) = dp;
  drho(1, 2) = drho(2, 1) = dp;  // dsigma/dbeta equals dp/dbeta
  return drho;
}

Generator reduced_generator(const Rates& rates, double delta) {
  Generator g;
  g.matrix = unified_generator_v(rates, delta).homogeneous();
  g.basis = Generator::Basis::reduced_v_model;
  g.state_dim = 3;
  return g;
}

namespace {

double golden_rule_rate(const SpectralDensity& bath, double beta, double omega) {
  if (omega > 0.0) return bath(omega) * (bose_einstein(omega, beta) + 1.0);
  if (omega < 0.0) return bath(-omega) * bose_einstein(-omega, beta);
  return bath.gamma / beta;  // Ohmic zero-frequency limit of J(w) n_B(w)
}

struct EigenOperator {
  double omega;
  ComplexMatrix op;
};

std::vector<EigenOperator> eigen_operators(const ProbeModel& model, double group_tol) {
  std::size_t d = model.dim();
  std::vector<EigenOperator> ops;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      cdouble s = model.coupling(a, b);
      if (std::abs(s) == 0.0) continue;
      double omega = model.level_energies[b] - model.level_energies[a];
      auto it = std::find_if(ops.begin(), ops.end(), [&](const EigenOperator& e) {
        return std::abs(e.omega - omega) <= group_tol;
      });
      if (it == ops.end()) {
        ops.push_back({omega, ComplexMatrix(d, d)});
        it = std::prev(ops.end());
      }
      it->op(a, b) += s;
    }
  }
  std::sort(ops.begin(), ops.end(),
            [](const EigenOperator& x, const EigenOperator& y) { return x.omega < y.omega; });
  return ops;
}

void add_dissipator(ComplexMatrix& sup, const ComplexMatrix& a, double rate) {
  std::size_t d = a.rows();
  ComplexMatrix adag = a.adjoint();
  ComplexMatrix ada = adag * a;
  ComplexMatrix id = ComplexMatrix::identity(d);
  ComplexMatrix term = superop_sandwich(a, adag);
  ComplexMatrix anti = superop_sandwich(ada, id) + superop_sandwich(id, ada);
  anti *= 0.5;
  term -= anti;
  term *= rate;
  sup += term;
}

void check_trace_preservation(const ComplexMatrix& sup, std::size_t d) {
  double worst = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      cdouble col = 0.0;
      for (std::size_t i = 0; i < d; ++i) col += sup(i * d + i, k * d + l);
      worst = std::max(worst, std::abs(col));
    }
  double scale = std::max(sup.max_abs(), 1e-300);
  if (worst > 1e-12 * scale)
    throw InvariantError(fmt::format(
        "redfield generator breaks trace preservation: column sum {:.3e}", worst));
}

}  // namespace

Generator build_redfield_generator(const ProbeModel& model, RedfieldVariant variant,
                                   double cluster_tol) {
  std::size_t d = model.dim();
  ComplexMatrix h = model.hamiltonian();
  if (!model.coupling.is_hermitian(1e-12))
    throw DomainError("build_redfield_generator: coupling operator not Hermitian");

  ComplexMatrix id = ComplexMatrix::identity(d);
  ComplexMatrix sup(d * d, d * d);
  // Coherent part -i [H, rho].
  ComplexMatrix coh = superop_sandwich(h, id) - superop_sandwich(id, h);
  coh *= cdouble(0.0, -1.0);
  sup += coh;

  double group_tol = 1e-12 * std::max(model.nu(), 1.0);
  std::vector<EigenOperator> ops = eigen_operators(model, group_tol);

  switch (variant) {
    case RedfieldVariant::unified: {
      // Cluster Bohr frequencies within cluster_tol; the representative is
      // the largest-magnitude member so rates sample J at the manifold gap.
      std::size_t i = 0;
      while (i < ops.size()) {
        std::size_t j = i;
        while (j + 1 < ops.size() && ops[j + 1].omega - ops[i].omega <= cluster_tol) ++j;
        double rep = ops[i].omega;
        ComplexMatrix coll = ops[i].op;
        for (std::size_t m = i + 1; m <= j; ++m) {
          if (std::abs(ops[m].omega) > std::abs(rep)) rep = ops[m].omega;
          coll += ops[m].op;
        }
        add_dissipator(sup, coll, 2.0 * golden_rule_rate(model.bath, model.beta, rep));
        i = j + 1;
      }
      break;
    }
    case RedfieldVariant::full_secular: {
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          cdouble s = model.coupling(a, b);
          if (std::abs(s) == 0.0) continue;
          double omega = model.level_energies[b] - model.level_energies[a];
          ComplexMatrix e(d, d);
          e(a, b) = s;
          add_dissipator(sup, e, 2.0 * golden_rule_rate(model.bath, model.beta, omega));
        }
      break;
    }
    case RedfieldVariant::nonsecular: {
      ComplexMatrix lam(d, d);
      for (const auto& e : ops) {
        ComplexMatrix term = e.op;
        term *= golden_rule_rate(model.bath, model.beta, e.omega);
        lam += term;
      }
      ComplexMatrix lam_dag = lam.adjoint();
      const ComplexMatrix& s = model.coupling;
      // [Lambda rho, S] + [S, rho Lambda^dag]
      sup += superop_sandwich(lam, s) - superop_sandwich(s * lam, id);
      sup += superop_sandwich(s, lam_dag) - superop_sandwich(id, lam_dag * s);
      break;
    }
  }

  check_trace_preservation(sup, d);
  Generator g;
  g.matrix = std::move(sup);
  g.basis = Generator::Basis::vectorized;
  g.state_dim = d;
  return g;
}

ReducedState reduce(const ComplexMatrix& rho) {
  ReducedState v;
  v.p = 0.5 * (rho(1, 1).real() + rho(2, 2).real());
  v.sigmaR = rho(2, 1).real();
  v.sigmaI = rho(2, 1).imag();
  return v;
}

EvolveResult evolve(const Generator& gen, const ComplexMatrix& rho0,
                    const std::vector<double>& times) {
  EvolveResult out;
  if (gen.basis == Generator::Basis::reduced_v_model) {
    if (rho0.rows() != 3) throw DomainError("evolve: reduced basis expects a 3x3 state");
    ReducedState v0 = reduce(rho0);
    cvector h0 = {v0.p, v0.sigmaR, v0.sigmaI, 1.0};
    PropagationResult prop = propagate_spectral(gen.matrix, h0, times);
    out.used_fallback = prop.used_expm_fallback;
    for (const auto& v : prop.states) {
      double p = v[0].real(), sr = v[1].real(), si = v[2].real();
      ComplexMatrix rho(3, 3);
      rho(0, 0) = 1.0 - 2.0 * p;
      rho(1, 1) = rho(2, 2) = p;
      rho(2, 1) = cdouble(sr, si);
      rho(1, 2) = std::conj(rho(2, 1));
      out.states.push_back(rho);
    }
  } else {
    std::size_t d = gen.state_dim;
    if (rho0.rows() != d) throw DomainError("evolve: state dimension mismatch");
    PropagationResult prop = propagate_spectral(gen.matrix, rho0.data(), times);
    out.used_fallback = prop.used_expm_fallback;
    for (const auto& v : prop.states) {
      ComplexMatrix rho(d, d);
      rho.data() = v;
      double herm = rho.hermiticity_defect();
      // The generator commutes with Hermitian conjugation, so any
      // anti-Hermitian component is propagator roundoff. Gate it, then
      // project back onto the symmetry-invariant (Hermitian) subspace.
      if (herm > 1e-7)
        throw InvariantError(fmt::format(
            "evolve: Hermiticity defect {:.3e} exceeds the 1e-7 noise gate", herm));
      ComplexMatrix adj = rho.adjoint();
      rho += adj;
      rho *= 0.5;
      out.states.push_back(rho);
    }
  }
  for (auto& rho : out.states) {
    double terr = std::abs(rho.trace() - 1.0);
    // Trace preservation is an exact symmetry of the generator; the raw
    // defect is eigenbasis roundoff (the superoperator carries the
    // near-degenerate 0 / lambda1 pair), so gate it and renormalize.
    if (terr > 1e-9)
      throw InvariantError(fmt::format("evolve: trace error {:.3e} exceeds 1e-9", terr));
    rho *= 1.0 / rho.trace().real();
    out.trace_errors.push_back(terr);
    ComplexMatrix sym = rho;
    sym += rho.adjoint();
    sym *= 0.5;
    out.min_eigenvalues.push_back(min_eigenvalue(sym));
  }
  return out;
}

TimescaleReport analyze_timescales(const Generator& gen, const ComplexMatrix* rho0,
                                   double gap_threshold) {
  EigenSystem es = general_eig(gen.matrix);
  double norm = std::max(gen.matrix.max_abs(), 1e-300);
  std::size_t n = es.eigenvalues.size();

  std::vector<bool> keep(n, true);
  if (rho0 != nullptr) {
    cvector v0;
    if (gen.basis == Generator::Basis::reduced_v_model) {
      ReducedState r = reduce(*rho0);
      v0 = {r.p, r.sigmaR, r.sigmaI, 1.0};
    } else {
      v0 = rho0->data();
    }
    cvector w = es.inverse_vectors.apply(v0);
    double wmax = 0.0;
    for (const auto& c : w) wmax = std::max(wmax, std::abs(c));
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(w[i]) <= 1e-10 * std::max(wmax, 1e-300)) keep[i] = false;
  }

  cvector active;
  std::size_t zero_modes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    if (std::abs(es.eigenvalues[i]) < 1e-12 * norm) { ++zero_modes; continue; }
    active.push_back(es.eigenvalues[i]);
  }
  std::sort(active.begin(), active.end(), [](cdouble a, cdouble b) {
    return std::abs(a.real()) < std::abs(b.real());
  });

  TimescaleReport rep;
  rep.eigenvalues = active;
  rep.nonrelaxing = zero_modes > 1;
  const double inf = std::numeric_limits<double>::infinity();
  auto tau_of = [&](std::size_t i) {
    if (i >= active.size()) return 0.0;
    double re = std::abs(active[i].real());
    return re < 1e-12 * norm ? inf : 1.0 / re;
  };
  rep.tau1 = rep.nonrelaxing ? inf : tau_of(0);
  rep.tau2 = rep.nonrelaxing ? tau_of(0) : tau_of(1);
  rep.tau3 = rep.nonrelaxing ? tau_of(1) : tau_of(2);

  std::vector<double> rates;
  for (const auto& l : active) {
    double re = std::abs(l.real());
    if (re >= 1e-12 * norm) rates.push_back(re);
  }
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-9 * b; }),
              rates.end());
  for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
    double ratio = rates[i + 1] / rates[i];
    if (ratio > rep.separation_ratio) {
      rep.separation_ratio = ratio;
      rep.tau_window_slow = 1.0 / rates[i];
      rep.tau_window_fast = 1.0 / rates[i + 1];
    }
  }
  if (rep.tau_window_slow > 0.0)
    rep.t_plateau = std::sqrt(rep.tau_window_slow * rep.tau_window_fast);
  rep.window_nonempty = !rep.nonrelaxing && rep.separation_ratio > gap_threshold;
  return rep;
}

}  // namespace prethermo
