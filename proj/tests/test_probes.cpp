#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prethermo/errors.hpp"
#include "prethermo/probes.hpp"

using namespace prethermo;

TEST_CASE("bose_einstein values") {
  CHECK(bose_einstein(1.0, 4.0) == doctest::Approx(0.0186574).epsilon(1e-5));
  CHECK(bose_einstein(1.0, 4.0) == doctest::Approx(1.0 / std::expm1(4.0)).epsilon(1e-14));
  CHECK(bose_einstein(1.0, 700.0) < 1e-300);              // beta -> inf limit
  CHECK(bose_einstein(1.0, std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(bose_einstein(0.0, 4.0), DomainError);
  CHECK_THROWS_AS(bose_einstein(1.0, -1.0), DomainError);
}

TEST_CASE("thermal_rates at Fig.-1 parameters") {
  ProbeModel m = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);
  Rates r = thermal_rates(m);
  CHECK(r.k == doctest::Approx(0.1426120).epsilon(1e-6));
  CHECK(r.phi == doctest::Approx(0.1478363).epsilon(1e-6));
  CHECK(r.phi == doctest::Approx(r.k * (1.0 + 2.0 * std::exp(-4.0))).epsilon(1e-14));
  CHECK(r.phi > r.k);

  ProbeModel cold = ProbeModel::v_model(1.0, 1e-4, 0.07, 500.0);
  Rates rc = thermal_rates(cold);
  CHECK(rc.k == doctest::Approx(2.0 * 0.07).epsilon(1e-12));
  CHECK(rc.phi == doctest::Approx(rc.k).epsilon(1e-12));
}

TEST_CASE("thermal_rates monotone in temperature") {
  double prev = 0.0;
  for (double beta : {8.0, 6.0, 4.0, 2.0, 1.0, 0.5, 0.25}) {
    Rates r = thermal_rates(ProbeModel::v_model(1.0, 1e-4, 0.07, beta));
    CHECK(r.k > prev);
    prev = r.k;
  }
}

TEST_CASE("v_model structure") {
  ProbeModel m = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);
  CHECK(m.dim() == 3);
  CHECK(m.level_energies[0] == 0.0);
  CHECK(m.level_energies[1] == doctest::Approx(1.0 - 1e-4).epsilon(1e-14));
  CHECK(m.nu() == 1.0);
  // S = sum_i |1><i+1| + h.c.: Hermitian, zero diagonal, unit ground-excited.
  CHECK(m.coupling.is_hermitian());
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(m.coupling(i, i)) == 0.0);
  CHECK(m.coupling(0, 1) == cdouble(1.0));
  CHECK(m.coupling(0, 2) == cdouble(1.0));
  CHECK(std::abs(m.coupling(1, 2)) == 0.0);
  CHECK_THROWS_AS(ProbeModel::v_model(1.0, 0.5, 0.07, 4.0), DomainError);
  CHECK_THROWS_AS(ProbeModel::v_model(1.0, -1e-4, 0.07, 4.0), DomainError);
}

TEST_CASE("gibbs_state values") {
  ProbeModel q = ProbeModel::qubit(1.0, 0.07, 4.0);
  ComplexMatrix g = gibbs_state(q);
  CHECK(g(0, 0).real() == doctest::Approx(0.982014).epsilon(1e-5));
  CHECK(g(1, 1).real() == doctest::Approx(0.017986).epsilon(1e-4));

  ProbeModel v0 = ProbeModel::n_level(2, 1.0, 0.07, 4.0);  // degenerate V, delta = 0
  ComplexMatrix gv = gibbs_state(v0);
  CHECK(gv(1, 1).real() == doctest::Approx(0.017668).epsilon(1e-4));
  CHECK(gv(2, 2).real() == doctest::Approx(0.017668).epsilon(1e-4));
  CHECK(std::abs(gv.trace() - 1.0) < 1e-14);

  ComplexMatrix cold = gibbs_state(ProbeModel::qubit(1.0, 0.07, 800.0));
  CHECK(cold(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));

  for (std::size_t n : {1, 2, 3, 10}) {
    ProbeModel m = ProbeModel::n_level(n, 1.0, 0.07, 4.0);
    ComplexMatrix gn = gibbs_state(m);
    double expect = std::exp(-4.0) / (1.0 + n * std::exp(-4.0));
    for (std::size_t j = 1; j <= n; ++j)
      CHECK(gn(j, j).real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(min_eigenvalue(gn) >= -1e-12);
  }
}

TEST_CASE("gibbs_state_dbeta is traceless and matches finite difference") {
  ProbeModel m = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);
  ComplexMatrix d = gibbs_state_dbeta(m);
  CHECK(std::abs(d.trace()) < 1e-12);
  double h = 1e-6;
  ComplexMatrix hi = gibbs_state(ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0 + h));
  ComplexMatrix lo = gibbs_state(ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0 - h));
  hi -= lo;
  hi *= 1.0 / (2.0 * h);
  hi -= d;
  CHECK(hi.max_abs() < 1e-9);
}

TEST_CASE("initial_state reduced coordinates") {
  ProbeModel m = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);

  InitialState g = initial_state(m, InitialSpec{});
  CHECK(g.p0 == 0.0);
  CHECK(g.sigma0R == 0.0);
  CHECK(g.xi == 0.0);
  CHECK(g.rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));

  InitialSpec mix;
  mix.kind = InitialKind::maximally_mixed;
  InitialState x = initial_state(m, mix);
  CHECK(x.p0 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(x.xi == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));

  InitialSpec amb;
  amb.kind = InitialKind::ambient_thermal;
  amb.beta_ambient = 2.5;
  InitialState t = initial_state(m, amb);
  CHECK(t.p0 == doctest::Approx(0.070510).epsilon(1e-4));
  CHECK(t.xi == doctest::Approx(-0.070510).epsilon(1e-4));
  CHECK(t.p0 == doctest::Approx(std::exp(-2.5) / (1.0 + 2.0 * std::exp(-2.5))).epsilon(1e-12));
}

TEST_CASE("initial_state custom physical and unphysical") {
  ProbeModel m = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);

  InitialSpec sup;
  sup.kind = InitialKind::custom;
  sup.p2 = sup.p3 = 0.5;
  sup.sigma0R = -0.5;
  InitialState s = initial_state(m, sup);
  CHECK(s.xi == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(min_eigenvalue(s.rho) >= -1e-12);

  InitialSpec bad;
  bad.kind = InitialKind::custom;
  bad.sigma0R = 0.5;  // coherence without population
  CHECK_THROWS_AS(initial_state(m, bad), DomainError);
}

TEST_CASE("produced states satisfy the shared invariants") {
  ProbeModel m = ProbeModel::v_model(1.0, 1e-4, 0.07, 4.0);
  std::vector<ComplexMatrix> states{gibbs_state(m), initial_state(m, InitialSpec{}).rho};
  InitialSpec mix;
  mix.kind = InitialKind::maximally_mixed;
  states.push_back(initial_state(m, mix).rho);
  for (const auto& rho : states) {
    CHECK(rho.is_hermitian());
    CHECK(std::abs(rho.trace() - 1.0) < 1e-14);
    CHECK(min_eigenvalue(rho) >= -1e-12);
  }
}

TEST_CASE("n_level stagger") {
  ProbeModel m = ProbeModel::n_level(4, 1.0, 0.07, 4.0, 1e-4);
  CHECK(m.dim() == 5);
  CHECK(m.level_energies[4] == 1.0);
  CHECK(m.level_energies[1] == doctest::Approx(1.0 - 3e-4).epsilon(1e-12));
  CHECK(m.coupling.is_hermitian());
}
