#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "prethermo/dynamics.hpp"
#include "prethermo/errors.hpp"
#include "prethermo/metrology.hpp"
#include "prethermo/probes.hpp"

using namespace prethermo;

namespace {

// e^4 / (1 + e^4)^2, the qubit thermal sensitivity at beta = 4, nu = 1.
const double kQubitQfi = std::exp(4.0) / std::pow(1.0 + std::exp(4.0), 2);

double energy_variance(const ProbeModel& m) {
  ComplexMatrix h = m.hamiltonian();
  ComplexMatrix rho = gibbs_state(m);
  double e1 = (h * rho).trace().real();
  double e2 = (h * h * rho).trace().real();
  return e2 - e1 * e1;
}

std::vector<double> diag_of(const ComplexMatrix& a) {
  std::vector<double> d(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) d[i] = a(i, i).real();
  return d;
}

}  // namespace

TEST_CASE("cfi_from_populations") {
  CHECK(cfi_from_populations({0.3, 0.7}, {0.0, 0.0}) == 0.0);

  double g = 1.0 / (1.0 + std::exp(-4.0));
  double dg = 0.017662;
  CHECK(cfi_from_populations({g, 1.0 - g}, {dg, -dg}) ==
        doctest::Approx(0.017663).epsilon(2e-4));
  CHECK(cfi_from_populations({g, 1.0 - g}, {dg, -dg}) ==
        doctest::Approx(kQubitQfi).epsilon(2e-4));

  PrethermalState pre = prethermal_state(4.0, 1.0, 0.0);
  std::vector<double> p = diag_of(pre.matrix());
  std::vector<double> dp = diag_of(pre.matrix_dbeta());
  CHECK(cfi_from_populations(p, dp) == doctest::Approx(kQubitQfi).epsilon(1e-9));

  CHECK_THROWS_AS(cfi_from_populations({0.4, 0.4}, {0.1, -0.1}), DomainError);
  CHECK_THROWS_AS(cfi_from_populations({0.5, 0.5}, {0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(cfi_from_populations({1.001, -0.001}, {0.0, 0.0}), DomainError);
}

TEST_CASE("sld on zero derivative and Gibbs families") {
  ProbeModel v = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);
  ComplexMatrix rho = gibbs_state(v);
  Sld zero = sld(rho, ComplexMatrix(3, 3));
  CHECK(zero.matrix.max_abs() == 0.0);
  CHECK(zero.support_dimension == 3);

  // For the Gibbs family, L = <H> - H.
  ComplexMatrix h = v.hamiltonian();
  double mean = (h * rho).trace().real();
  Sld l = sld(rho, gibbs_state_dbeta(v));
  ComplexMatrix expect = ComplexMatrix::identity(3);
  expect *= mean;
  expect -= h;
  expect -= l.matrix;
  CHECK(expect.max_abs() < 1e-9);
}

TEST_CASE("sld satisfies its defining equation") {
  PrethermalState pre = prethermal_state(4.0, 1.0, -0.5);
  ComplexMatrix rho = pre.matrix();
  ComplexMatrix drho = pre.matrix_dbeta();
  Sld l = sld(rho, drho);
  CHECK(l.matrix.is_hermitian(1e-12));
  ComplexMatrix anti = l.matrix * rho + rho * l.matrix;
  anti *= 0.5;
  anti -= drho;
  CHECK(anti.max_abs() < 1e-10);
}

TEST_CASE("sld rejects derivative weight outside the support") {
  ComplexMatrix rho(2, 2);
  rho(0, 0) = 1.0;  // pure ground state
  ComplexMatrix drho(2, 2);
  drho(1, 1) = 0.1;
  drho(0, 0) = -0.1;
  CHECK_THROWS_AS(sld(rho, drho), DomainError);
}

TEST_CASE("qfi_from_state values") {
  ProbeModel q = ProbeModel::qubit(1.0, 0.07, 4.0);
  double qfi = qfi_from_state(gibbs_state(q), gibbs_state_dbeta(q));
  CHECK(qfi == doctest::Approx(0.017663).epsilon(1e-4));
  CHECK(qfi == doctest::Approx(energy_variance(q)).epsilon(1e-10));

  PrethermalState flat = prethermal_state(4.0, 1.0, 0.0);
  double qfi0 = qfi_from_state(flat.matrix(), flat.matrix_dbeta());
  double cfi0 = cfi_from_populations(diag_of(flat.matrix()), diag_of(flat.matrix_dbeta()));
  CHECK(qfi0 == doctest::Approx(kQubitQfi).epsilon(1e-9));
  CHECK(qfi0 == doctest::Approx(cfi0).epsilon(1e-9));

  PrethermalState half = prethermal_state(4.0, 1.0, -0.5);
  CHECK(qfi_from_state(half.matrix(), half.matrix_dbeta()) ==
        doctest::Approx(0.0088316).epsilon(1e-4));
}

TEST_CASE("qfi_truncated tolerates out-of-support rounding noise") {
  PrethermalState pre = prethermal_state(4.0, 1.0, -0.3);
  ComplexMatrix drho = pre.matrix_dbeta();
  CHECK(qfi_truncated(pre.matrix(), drho) ==
        doctest::Approx(qfi_from_state(pre.matrix(), drho)).epsilon(1e-12));

  ComplexMatrix rho(2, 2);
  rho(0, 0) = 1.0;
  ComplexMatrix noisy(2, 2);
  noisy(1, 1) = 1e-14;
  noisy(0, 0) = -1e-14;
  CHECK(qfi_truncated(rho, noisy) < 1e-12);  // the strict path would reject this
}

TEST_CASE("prethermal closed forms") {
  CHECK(cfi_prethermal_analytic(4.0, 1.0, -1.0) == 0.0);
  CHECK(qfi_prethermal_analytic(4.0, 1.0, -1.0) == 0.0);

  CHECK(cfi_prethermal_analytic(4.0, 1.0, 0.0) == doctest::Approx(kQubitQfi).epsilon(1e-12));
  CHECK(qfi_prethermal_analytic(4.0, 1.0, 0.0) == doctest::Approx(kQubitQfi).epsilon(1e-12));

  CHECK(cfi_prethermal_analytic(4.0, 1.0, -0.5) == doctest::Approx(3.1207e-4).epsilon(1e-4));
  CHECK(qfi_prethermal_analytic(4.0, 1.0, -0.5) == doctest::Approx(0.0088316).epsilon(1e-4));

  CHECK_THROWS_AS(qfi_prethermal_analytic(4.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(cfi_prethermal_analytic(4.0, 1.0, -1.5), DomainError);
}

TEST_CASE("equilibrium QFI of the V model") {
  CHECK(qfi_equilibrium_v(4.0, 1.0) == doctest::Approx(0.034088).epsilon(1e-4));
  CHECK(qfi_equilibrium_v(4.0, 1.0) ==
        doctest::Approx(qfi_equilibrium_n(4.0, 1.0, 2.0)).epsilon(1e-14));
  CHECK(qfi_equilibrium_v(500.0, 1.0) < 1e-200);

  // Agrees with the generic path on the degenerate three-level Gibbs state.
  ProbeModel m = ProbeModel::n_level(2, 1.0, 0.07, 4.0);
  double generic = qfi_from_state(gibbs_state(m), gibbs_state_dbeta(m));
  CHECK(qfi_equilibrium_v(4.0, 1.0) == doctest::Approx(generic).epsilon(1e-10));
}

TEST_CASE("equilibrium QFI of the N-level probe") {
  CHECK(qfi_equilibrium_n(4.0, 1.0, 1.0) == doctest::Approx(kQubitQfi).epsilon(1e-12));
  CHECK(qfi_equilibrium_n(4.0, 1.0, 55.0) == doctest::Approx(0.2499966).epsilon(1e-5));

  // F_N = d^2/dbeta^2 ln(1 + N e^{-beta nu}).
  for (double n : {2.0, 7.0, 55.0}) {
    auto lnz = [n](double b) { return std::log(1.0 + n * std::exp(-b)); };
    double h = 1e-4;
    double second = (lnz(4.0 + h) - 2.0 * lnz(4.0) + lnz(4.0 - h)) / (h * h);
    CHECK(qfi_equilibrium_n(4.0, 1.0, n) == doctest::Approx(second).epsilon(1e-6));
  }
  CHECK_THROWS_AS(qfi_equilibrium_n(4.0, 1.0, 0.0), DomainError);
}

TEST_CASE("optimal_degeneracy") {
  OptimalDegeneracy d4 = optimal_degeneracy(4.0, 1.0);
  CHECK(d4.n_continuous == doctest::Approx(std::exp(4.0)).epsilon(1e-14));
  CHECK(d4.n_integer == 55);
  CHECK(d4.f_optimum == doctest::Approx(0.25).epsilon(1e-14));

  CHECK(optimal_degeneracy(std::log(3.0), 1.0).n_integer == 3);

  OptimalDegeneracy d2 = optimal_degeneracy(1.0, 2.0);  // beta nu = 2
  CHECK(d2.n_continuous == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(d2.n_integer == 7);
  CHECK(d2.f_optimum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(qfi_equilibrium_n(1.0, 2.0, 7.0) > qfi_equilibrium_n(1.0, 2.0, 8.0));
}

TEST_CASE("time-weighted figures of merit") {
  CHECK(time_weighted(0.017663, 7.0120) == doctest::Approx(2.519e-3).epsilon(1e-3));
  CHECK(time_weighted(0.034088, 2.8018e7) == doctest::Approx(1.2167e-9).epsilon(1e-4));
  double ratio = time_weighted(0.017663, 7.0120) / time_weighted(0.034088, 2.8018e7);
  CHECK(ratio == doctest::Approx(2.07e6).epsilon(1e-2));
  CHECK_THROWS_AS(time_weighted(1.0, 0.0), DomainError);
}

TEST_CASE("precision_bound and improvement factor") {
  PrecisionBound b = precision_bound(0.25, 1.0);
  CHECK(b.delta_beta == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(b.unbounded);
  CHECK(precision_bound(0.25, 4.0).delta_beta == doctest::Approx(1.0).epsilon(1e-14));

  PrecisionBound flat = precision_bound(0.0, 1.0);
  CHECK(flat.unbounded);
  CHECK(std::isinf(flat.delta_beta));

  CHECK(improvement_factor(2.8018e7, 7.0120) == doctest::Approx(1999.0).epsilon(1e-3));
}

TEST_CASE("dstate_dbeta central differences") {
  ComplexMatrix fixed(2, 2);
  fixed(0, 0) = 0.7;
  fixed(1, 1) = 0.3;
  auto constant = [&](double) { return fixed; };
  CHECK(dstate_dbeta(constant, 4.0).max_abs() < 1e-12);

  auto builder = [](double b) { return prethermal_state(b, 1.0, 0.0).matrix(); };
  ComplexMatrix d = dstate_dbeta(builder, 4.0);
  CHECK(std::abs(d.trace()) < 1e-9);
  double expect = -std::exp(-4.0) / (2.0 * std::pow(1.0 + std::exp(-4.0), 2));
  CHECK(d(1, 1).real() == doctest::Approx(expect).epsilon(1e-7));

  // Central differences converge at second order: halving h shrinks the
  // defect against the analytic derivative by about 4x.
  ComplexMatrix exact = prethermal_state(4.0, 1.0, 0.0).matrix_dbeta();
  auto defect = [&](double h) {
    ComplexMatrix e = dstate_dbeta(builder, 4.0, h);
    e -= exact;
    return e.max_abs();
  };
  double e1 = defect(1e-2), e2 = defect(5e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("QFI dominates CFI and matches the closed form on a grid") {
  for (int bi = 0; bi < 50; ++bi) {
    double beta = 0.5 + 5.5 * bi / 49.0;
    for (int xi_i = 0; xi_i <= 10; ++xi_i) {
      double xi = -1.0 + 0.1 * xi_i;
      double cfi = cfi_prethermal_analytic(beta, 1.0, xi);
      double qfi = qfi_prethermal_analytic(beta, 1.0, xi);
      CHECK(qfi >= cfi - 1e-10);

      PrethermalState pre = prethermal_state(beta, 1.0, xi);
      auto builder = [&](double b) { return prethermal_state(b, 1.0, xi).matrix(); };
      ComplexMatrix drho = dstate_dbeta(builder, beta);
      if (xi == -1.0) {
        // The state is beta-independent here; the finite difference leaves
        // rounding noise outside the support that only the lenient path takes.
        CHECK(std::abs(qfi_truncated(pre.matrix(), drho)) < 1e-12);
      } else {
        double numeric = qfi_from_state(pre.matrix(), drho);
        CHECK(std::abs(numeric - qfi) / qfi < 1e-6);
      }
    }
  }
}

TEST_CASE("Gibbs QFI equals the energy variance") {
  std::vector<ProbeModel> models{ProbeModel::qubit(1.0, 0.07, 4.0),
                                 ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0)};
  for (std::size_t n = 3; n <= 10; ++n)
    models.push_back(ProbeModel::n_level(n, 1.0, 0.07, 4.0));
  for (const auto& m : models) {
    double qfi = qfi_from_state(gibbs_state(m), gibbs_state_dbeta(m));
    CHECK(std::abs(qfi - energy_variance(m)) < 1e-9);
  }
}

TEST_CASE("finite differences track the analytic derivatives") {
  for (double xi : {0.0, -0.4, -0.9}) {
    auto builder = [&](double b) { return prethermal_state(b, 1.0, xi).matrix(); };
    ComplexMatrix fd = dstate_dbeta(builder, 4.0);
    fd -= prethermal_state(4.0, 1.0, xi).matrix_dbeta();
    CHECK(fd.max_abs() < 1e-8);
  }
  auto gibbs_builder = [](double b) {
    return gibbs_state(ProbeModel::v_model(1.0, 1e-4, 0.07, b));
  };
  ComplexMatrix fd = dstate_dbeta(gibbs_builder, 4.0);
  fd -= gibbs_state_dbeta(ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0));
  CHECK(fd.max_abs() < 1e-8);
}

TEST_CASE("equilibrium QFI is unimodal in the degeneracy") {
  long long nstar = optimal_degeneracy(4.0, 1.0).n_integer;
  double best = qfi_equilibrium_n(4.0, 1.0, static_cast<double>(nstar));
  for (long long n = 1; n < 200; ++n) {
    double f = qfi_equilibrium_n(4.0, 1.0, static_cast<double>(n));
    double g = qfi_equilibrium_n(4.0, 1.0, static_cast<double>(n + 1));
    CHECK(f <= best);
    if (n + 1 <= nstar)
      CHECK(g > f);
    else if (n >= nstar)
      CHECK(g < f);
  }
}
